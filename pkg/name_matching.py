import logging
import re
from typing import Dict, Iterable, List, Optional, Tuple

from rapidfuzz import fuzz, process

logger = logging.getLogger(__name__)

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_GREEK = {"χ": "chi", "ρ": "rho", "φ": "phi", "Φ": "phi", "∨": "_dual"}


class UnknownNameError(LookupError):
    """Raised when a suite, scenario, module or character name cannot be resolved."""

    def __init__(self, kind: str, name: str, suggestion: Optional[str] = None):
        self.kind = kind
        self.name = name
        self.suggestion = suggestion
        message = f"unknown {kind} {name!r}"
        if suggestion:
            message += f"; did you mean {suggestion!r}?"
        super().__init__(message)


class NameMatcher:
    """Resolve user-supplied names against a fixed catalog, with fuzzy suggestions."""

    def __init__(self, kind: str, names: Iterable[str], aliases: Optional[Dict[str, str]] = None,
                 threshold: int = 60):
        self.kind = kind
        self.names: List[str] = list(names)
        self.aliases = dict(aliases or {})
        self.threshold = threshold
        self._normalized = {self._normalize_name(n): n for n in self.names}
        for alias, target in self.aliases.items():
            self._normalized.setdefault(self._normalize_name(alias), target)

    def _normalize_name(self, name: str) -> str:
        """Normalize a name for matching"""
        if not name:
            return ""
        for symbol, spelled in _GREEK.items():
            name = name.replace(symbol, spelled)
        name = name.translate(_SUBSCRIPTS)
        name = re.sub(r"[\s\-_]+", "", name)
        return name.lower()

    def _find_best_match(self, name: str) -> Optional[Tuple[str, float]]:
        """Best fuzzy candidate above the threshold"""
        normalized_input = self._normalize_name(name)
        candidates = list(self._normalized)
        if not candidates:
            return None

        strategies = [
            ("ratio", fuzz.ratio),
            ("partial_ratio", fuzz.partial_ratio),
            ("token_sort_ratio", fuzz.token_sort_ratio),
        ]

        best_match = None
        best_score = 0.0
        for strategy_name, strategy_func in strategies:
            match = process.extractOne(normalized_input, candidates, scorer=strategy_func,
                                       score_cutoff=self.threshold)
            if match and match[1] > best_score:
                best_score = match[1]
                best_match = self._normalized[match[0]]
                logger.debug(f"Candidate for '{name}': '{best_match}' (score: {best_score}, strategy: {strategy_name})")
        return (best_match, best_score) if best_match else None

    def suggest(self, name: str) -> Optional[str]:
        match = self._find_best_match(name)
        return match[0] if match else None

    def resolve(self, name: str) -> str:
        """Canonical name for an exact (normalized) match, else UnknownNameError with a suggestion."""
        if name in self.names:
            return name
        if name in self.aliases:
            return self.aliases[name]
        normalized = self._normalize_name(name)
        if normalized in self._normalized:
            return self._normalized[normalized]
        suggestion = self.suggest(name)
        raise UnknownNameError(self.kind, name, suggestion)
