"""Permutations, Cayley graphs, connectivity, packing search, verification and the oracle."""
