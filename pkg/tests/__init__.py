# Tests for infolattice
