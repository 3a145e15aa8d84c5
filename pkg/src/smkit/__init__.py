"""Machine-to-group constructions: S-machines, presentations and diagrams."""

from . import diagrams, growth, grouplab, presentations, smachine, smio, turing, words
from .presentations import Presentation, area_insertion, symmetrize
from .smachine import Bounds, Configuration, SMachine, adding_machine, explore
from .words import EMPTY, Word, parse_word

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "Bounds",
    "Configuration",
    "Presentation",
    "SMachine",
    "Word",
    "adding_machine",
    "area_insertion",
    "diagrams",
    "explore",
    "growth",
    "grouplab",
    "parse_word",
    "presentations",
    "smachine",
    "smio",
    "symmetrize",
    "turing",
    "words",
]
