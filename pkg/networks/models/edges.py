"""
Edge-list input description.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from django.db import models

from core.exceptions import ConfigurationError


class Directedness(models.TextChoices):
    DIRECTED = 'directed', 'Directed'
    UNDIRECTED = 'undirected', 'Undirected'


class DegreeMode(models.TextChoices):
    IN = 'in', 'In-degree'
    OUT = 'out', 'Out-degree'
    TOTAL = 'total', 'Total degree'


class SelfLoopPolicy(models.TextChoices):
    DROP = 'drop', 'Drop'
    COUNT = 'count', 'Count'


class Delimiter(models.TextChoices):
    AUTO = 'auto', 'Auto-detect'
    WHITESPACE = 'whitespace', 'Whitespace'
    COMMA = 'comma', 'Comma'
    TAB = 'tab', 'Tab'


@dataclass(frozen=True)
class EdgeListSpec:
    """
    How to read an edge list and which degree to count.

    Repeated edges count once per occurrence unless `dedup` is set.
    """

    path: Path
    delimiter: str = Delimiter.AUTO
    directedness: str = Directedness.UNDIRECTED
    degree_mode: str = DegreeMode.TOTAL
    comment_prefix: str = '#'
    self_loop_policy: str = SelfLoopPolicy.DROP
    dedup: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'path', Path(self.path))
        for value, choices, name in (
            (self.delimiter, Delimiter, 'delimiter'),
            (self.directedness, Directedness, 'directedness'),
            (self.degree_mode, DegreeMode, 'degree mode'),
            (self.self_loop_policy, SelfLoopPolicy, 'self-loop policy'),
        ):
            if value not in choices.values:
                raise ConfigurationError(f"unknown {name} {value!r}")
        if self.degree_mode != DegreeMode.TOTAL and self.directedness != Directedness.DIRECTED:
            raise ConfigurationError(f"degree mode {self.degree_mode!r} requires a directed edge list")

    @property
    def is_directed(self) -> bool:
        return self.directedness == Directedness.DIRECTED

    def separator(self, sample: Optional[str] = None) -> Optional[str]:
        """Token separator for str.split (None means any whitespace)."""
        if self.delimiter == Delimiter.COMMA:
            return ','
        if self.delimiter == Delimiter.TAB:
            return '\t'
        if self.delimiter == Delimiter.WHITESPACE or sample is None:
            return None
        if ',' in sample:
            return ','
        if '\t' in sample:
            return '\t'
        return None
