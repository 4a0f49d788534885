"""Tightness classifier for small Seifert fibered spaces with e0 = -1."""
from .cf import cf_eval, cf_expand, riemenschneider_dual
from .seifert import SeifertInvariants, euler_number, normalize, realizable, reverse_orientation
from .plumbing import PlumbingTree, StarShape, dual_tree, recognize_Mn, star_tree_from_seifert
from .classify import ClassifierInput, Report, classify, verify_certificate

__all__ = [
    "cf_eval", "cf_expand", "riemenschneider_dual",
    "SeifertInvariants", "euler_number", "normalize", "realizable", "reverse_orientation",
    "PlumbingTree", "StarShape", "dual_tree", "recognize_Mn", "star_tree_from_seifert",
    "ClassifierInput", "Report", "classify", "verify_certificate",
]

__version__ = "0.1.0"
