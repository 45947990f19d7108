"""Gazetteer and lexicon files backing the rule-based extractor.

All files are UTF-8, one entry per line, '#' starts a comment. Entry matching
is casefolded throughout. The bundled files live in conceptmap/data; a
different directory can be supplied for domain-specific vocabularies.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path


def _data_root() -> Path:
    return Path(str(resources.files("conceptmap").joinpath("data")))


def read_entries(path: Path) -> list[str]:
    entries = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return entries


def _read_set(path: Path) -> frozenset[str]:
    return frozenset(e.casefold() for e in read_entries(path))


@dataclass(frozen=True)
class PronounInfo:
    number: str  # SINGULAR | PLURAL | AMBIGUOUS
    gender: str  # male | female | neuter | any


@dataclass(frozen=True)
class Lexicon:
    person_names: frozenset[str]       # full names, possibly multiword
    given_names: frozenset[str]        # single tokens, derived + gendered lists
    female_names: frozenset[str]
    male_names: frozenset[str]
    honorifics: frozenset[str]
    org_suffixes: frozenset[str]
    locations: frozenset[str]
    location_suffixes: frozenset[str]
    direction_words: frozenset[str]
    collective_nouns: frozenset[str]
    plural_nouns: frozenset[str]
    pronouns: dict[str, PronounInfo]
    verbs: frozenset[str]
    aux_verbs: frozenset[str]
    prepositions: frozenset[str]
    determiners: frozenset[str]
    adverbs: frozenset[str]
    adjectives: frozenset[str]
    conjunctions: frozenset[str]
    temporal_nouns: frozenset[str]

    def pronoun(self, token: str) -> PronounInfo | None:
        return self.pronouns.get(token.casefold())


def _load_pronouns(path: Path) -> dict[str, PronounInfo]:
    table = {}
    for entry in read_entries(path):
        parts = entry.split()
        if len(parts) != 3:
            raise ValueError(f"{path}: bad pronoun entry {entry!r}")
        token, number, gender = parts
        table[token.casefold()] = PronounInfo(number=number.upper(), gender=gender.lower())
    return table


@lru_cache(maxsize=4)
def load_lexicon(data_dir: str | None = None) -> Lexicon:
    """Load all gazetteer files from data_dir (default: bundled data)."""
    root = Path(data_dir) if data_dir else _data_root()
    person_names = _read_set(root / "person_names.txt")
    female = _read_set(root / "female_names.txt")
    male = _read_set(root / "male_names.txt")
    given = frozenset(
        {n.split()[0] for n in person_names} | female | male
    )
    return Lexicon(
        person_names=person_names,
        given_names=given,
        female_names=female,
        male_names=male,
        honorifics=_read_set(root / "honorifics.txt"),
        org_suffixes=_read_set(root / "org_suffixes.txt"),
        locations=_read_set(root / "locations.txt"),
        location_suffixes=_read_set(root / "location_suffixes.txt"),
        direction_words=_read_set(root / "direction_words.txt"),
        collective_nouns=_read_set(root / "collective_nouns.txt"),
        plural_nouns=_read_set(root / "plural_nouns.txt"),
        pronouns=_load_pronouns(root / "pronouns.txt"),
        verbs=_read_set(root / "verbs.txt"),
        aux_verbs=_read_set(root / "aux_verbs.txt"),
        prepositions=_read_set(root / "prepositions.txt"),
        determiners=_read_set(root / "determiners.txt"),
        adverbs=_read_set(root / "adverbs.txt"),
        adjectives=_read_set(root / "adjectives.txt"),
        conjunctions=_read_set(root / "conjunctions.txt"),
        temporal_nouns=_read_set(root / "temporal_nouns.txt"),
    )


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset[str]:
    """Sentence-splitter abbreviation list, lowercase with trailing period."""
    entries = read_entries(_data_root() / "abbreviations.txt")
    return frozenset(e.casefold() if e.endswith(".") else e.casefold() + "." for e in entries)
