# Test package for the Neretin toolkit
