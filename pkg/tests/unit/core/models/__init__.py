# Test package for core models 