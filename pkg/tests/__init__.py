# Test package for cliffordkt
