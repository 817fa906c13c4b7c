"""Constructions of n-1 internally disjoint Steiner trees for 4-sets in EA_n."""

from godan_idst.builder.dispatch import base_ea3, build_idsts, recurse_case, validate_terminals
from godan_idst.builder.parts import an_idst_pack, lemma_ans3, lemma_s4
from godan_idst.builder.split3 import lemma_s3
from godan_idst.builder.split22 import lemma_s22
from godan_idst.builder.split211 import lemma_s211
from godan_idst.builder.split1111 import lemma_s1111
from godan_idst.builder.translation import left_translate

__all__ = [
    "an_idst_pack",
    "base_ea3",
    "build_idsts",
    "left_translate",
    "lemma_ans3",
    "lemma_s3",
    "lemma_s4",
    "lemma_s22",
    "lemma_s211",
    "lemma_s1111",
    "recurse_case",
    "validate_terminals",
]
