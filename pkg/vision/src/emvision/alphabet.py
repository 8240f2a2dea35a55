"""Label alphabets over the EMNIST balanced split.

The balanced split carries 47 raw classes: digits 0-9, capitals A-Z, and
eleven lower-case letters whose shapes clearly differ from their capitals
(a b d e f g h n q r t, raw ids 36-46). The 47-class alphabet keeps them
separate; the 36-class alphabet folds each of those lower-case letters onto
its capital, so one register ends up holding both shapes of the letter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DIGITS = [str(d) for d in range(10)]
CAPITALS = [chr(c) for c in range(ord("A"), ord("Z") + 1)]
DISTINCT_LOWER = list("abdefghnqrt")

RAW_CLASS_NAMES = DIGITS + CAPITALS + DISTINCT_LOWER  # 47 entries


@dataclass(frozen=True)
class AlphabetMap:
    variant: int                  # 47 or 36
    class_names: tuple[str, ...]
    raw_to_id: np.ndarray         # (47,) raw balanced label -> class id

    @property
    def classes(self) -> int:
        return len(self.class_names)

    def apply(self, raw_labels: np.ndarray) -> np.ndarray:
        raw_labels = np.asarray(raw_labels, dtype=np.int64)
        if raw_labels.size and (raw_labels.min() < 0 or raw_labels.max() >= 47):
            raise ValueError("raw balanced labels must be in [0, 46]")
        return self.raw_to_id[raw_labels]


def capital_id(letter: str) -> int:
    return 10 + ord(letter.upper()) - ord("A")


def build_alphabet(variant: int) -> AlphabetMap:
    if variant == 47:
        return AlphabetMap(47, tuple(RAW_CLASS_NAMES), np.arange(47))
    if variant == 36:
        mapping = np.arange(47)
        for raw, letter in enumerate(DISTINCT_LOWER, start=36):
            mapping[raw] = capital_id(letter)
        return AlphabetMap(36, tuple(DIGITS + CAPITALS), mapping)
    raise ValueError(f"variant must be 47 or 36, got {variant}")
