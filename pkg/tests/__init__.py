# Test suite for zeta-workbench.
