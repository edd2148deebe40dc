# Unit tests for core client modules
