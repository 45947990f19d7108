"""Shared text primitives: tokenization, phrase normalization, light stemming.

Normalization is the comparison key used both for triple domination and for
entity merging in the graph, so it lives here rather than in either module.
"""
from __future__ import annotations

import re

_EDGE_PUNCT = "\"'`.,;:!?()[]{}<>*_-"
_LEADING_DETERMINERS = ("a", "an", "the")

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")
_WORD_RE = re.compile(r"[A-Za-z0-9]+(?:['-][A-Za-z0-9]+)*")

_VOWELS = set("aeiou")


def tokenize(text: str) -> list[tuple[int, int, str]]:
    """Split text into (start, end, token) triples.

    Words keep internal apostrophes ("government's" is one token);
    every other non-space character is its own token.
    """
    return [(m.start(), m.end(), m.group()) for m in _TOKEN_RE.finditer(text)]


def words(text: str) -> list[str]:
    """Word tokens only, punctuation dropped."""
    return _WORD_RE.findall(text)


def normalize_phrase(text: str) -> str:
    """Canonical comparison form of a phrase.

    Casefolds, collapses whitespace, strips punctuation from the edges and
    drops leading determiners (a/an/the). Applied to a fixed point so the
    result is idempotent by construction.
    """
    s = text
    prev = None
    while s != prev:
        prev = s
        s = " ".join(s.casefold().split())
        s = s.strip(_EDGE_PUNCT + " ")
        toks = s.split()
        while toks and toks[0] in _LEADING_DETERMINERS:
            toks.pop(0)
        s = " ".join(toks)
    return s


def stem_token(token: str) -> str:
    """Strip a single -ed / -ing / -(e)s suffix with doubled-consonant repair.

    Deliberately crude: it only has to make "travel" match "traveled to"
    style relation labels, not be a real stemmer.
    """
    t = token.casefold()
    if len(t) > 5 and t.endswith("ing"):
        t = t[:-3]
        t = _repair_doubling(t)
    elif len(t) > 4 and t.endswith("ied"):
        t = t[:-3] + "y"
    elif len(t) > 3 and t.endswith("ed"):
        t = t[:-2]
        t = _repair_doubling(t)
    elif len(t) > 3 and t.endswith("es") and t[-3] in "sxz" or t.endswith(("ches", "shes")):
        t = t[:-2]
    elif len(t) > 2 and t.endswith("s") and not t.endswith("ss"):
        t = t[:-1]
    return t


def _repair_doubling(t: str) -> str:
    if len(t) >= 2 and t[-1] == t[-2] and t[-1] not in _VOWELS and t[-1] != "s":
        return t[:-1]
    return t


def contains_token_seq(haystack: list[str], needle: list[str]) -> bool:
    """Whole-token-sequence containment ("ran" never matches inside "Iran")."""
    if not needle or len(needle) > len(haystack):
        return False
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i : i + len(needle)] == needle:
            return True
    return False
