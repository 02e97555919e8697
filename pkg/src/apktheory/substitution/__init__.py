"""Substitution rules (1D symbolic and 2D polygonal) and their patches."""

from .ops import Contact, Patch, TouchOracle, adjacency_closure, contacts_by_label, substitute
from .rule import (
    NonPrimitiveRule,
    Prototile1D,
    Prototile2D,
    RuleError,
    RuleSyntaxError,
    SubstitutionRule,
    closed_components,
    is_primitive,
    parse_rule,
    recurrent_part,
    rule_from_dict,
    rule_to_dict,
    serialize_rule,
)

__all__ = [
    "Contact",
    "NonPrimitiveRule",
    "Patch",
    "Prototile1D",
    "Prototile2D",
    "RuleError",
    "RuleSyntaxError",
    "SubstitutionRule",
    "TouchOracle",
    "adjacency_closure",
    "closed_components",
    "contacts_by_label",
    "is_primitive",
    "parse_rule",
    "recurrent_part",
    "rule_from_dict",
    "rule_to_dict",
    "serialize_rule",
    "substitute",
]
