# Test package for core functionality 