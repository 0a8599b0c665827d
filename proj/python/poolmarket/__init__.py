"""Carpool market equilibria: route prices, edge tolls and multi-population search."""

import json
import os

from . import _core
from ._core import Error

__all__ = ["Error", "solve", "verify", "oracle", "multipop", "gs_check", "fixture", "footnote_table"]


def _text(instance):
    if isinstance(instance, (dict, list)):
        return json.dumps(instance)
    if isinstance(instance, os.PathLike) or (isinstance(instance, str) and not instance.lstrip().startswith("{")):
        with open(instance, encoding="utf-8") as f:
            return f.read()
    return instance


def solve(instance, eps=None, edge_tolls=False, vcg=False, seed=1):
    """Solve a single-market instance (dict, JSON text or path); returns the report dict."""
    return json.loads(_core.solve(_text(instance), eps, edge_tolls, vcg, seed))


def verify(instance, report, eps=None):
    """Check a solve report against an instance; returns the verification dict."""
    return json.loads(_core.verify(_text(instance), _text(report), eps))


def oracle(instance):
    return _core.oracle(_text(instance))


def multipop(instance):
    return json.loads(_core.multipop(_text(instance)))


def gs_check(ground_size, table):
    """`table` maps frozensets of 1-based elements (or bit masks) to values."""
    masks = {}
    for key, value in table.items():
        if isinstance(key, int):
            masks[key] = float(value)
        else:
            masks[sum(1 << (i - 1) for i in key)] = float(value)
    return _core.gs_check(ground_size, masks)


def fixture(name):
    return json.loads(_core.fixture(name))


def footnote_table():
    return _core.footnote_table()
