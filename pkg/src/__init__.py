"""cohomolib: exact finite Galois cohomology and its batch runner."""
