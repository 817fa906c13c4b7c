"""
godan-idst.

Internally disjoint Steiner trees for 4-sets in godan graphs EA_n: the
constructions, an exact oracle for small graphs, a verifier and a batch CLI.
"""
