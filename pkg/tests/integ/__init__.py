# Offline acceptance tests for the detection pipeline
