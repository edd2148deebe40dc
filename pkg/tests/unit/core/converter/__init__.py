# Unit tests for core converter modules
