"""Arithmetic backends for light-leaf rows and intersection-form entries."""

import logging
import random
from abc import ABC, abstractmethod
from typing import Any, Dict, Sequence, Tuple

import config as constants
from ..algebra.coxeter import WElem
from ..algebra.polyring import RationalEntry
from ..utils.errors import AlgebraError, SpecializationError
from .localize import LocalizationModel

logger = logging.getLogger(__name__)


class PairingBackend(ABC):
    def __init__(self, model: LocalizationModel):
        """Initialize a backend over one localization model.

        Args:
            model: Generator matrices and Euler factors of the realization
        """
        self.model = model
        self.history: Dict[str, int] = {"twists": 0, "pairings": 0}

    @property
    @abstractmethod
    def zero(self) -> Any:
        """Additive identity."""

    @property
    @abstractmethod
    def one(self) -> Any:
        """Multiplicative identity."""

    @abstractmethod
    def twisted(self, entry: RationalEntry, x: WElem) -> Any:
        """Value of x(entry)."""

    @abstractmethod
    def euler(self, word: Sequence[int], bits: Sequence[int]) -> Any:
        """Value of the Euler factor P_g."""

    @abstractmethod
    def inverse_euler(self, word: Sequence[int], bits: Sequence[int]) -> Any:
        """Value of 1 / P_g."""

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def is_zero(self, a: Any) -> bool:
        pass

    @abstractmethod
    def finish(self, value: Any) -> Any:
        """Turn an accumulated pairing value into the backend's result type."""

    def reset(self) -> None:
        """Drop cached values."""
        self.history = {key: 0 for key in self.history}

    def get_history(self) -> Dict[str, int]:
        return self.history

    def pairing(self, row_e: Dict[Tuple[int, ...], Any], row_f: Dict[Tuple[int, ...], Any],
                word: Sequence[int], target_word: Sequence[int]) -> Any:
        """sum_g LL_e[top, g] LL_f[top, g] P_g / P_top."""
        self.history["pairings"] += 1
        total = self.zero
        for g, a in row_e.items():
            b = row_f.get(g)
            if b is None:
                continue
            total = self.add(total, self.mul(self.mul(a, b), self.euler(word, g)))
        top = (1,) * len(target_word)
        return self.finish(self.mul(total, self.inverse_euler(target_word, top)))


class SymbolicBackend(PairingBackend):
    """Exact fraction entries; pairings come back as polynomials."""

    def __init__(self, model: LocalizationModel):
        super().__init__(model)
        self._twists: Dict[Tuple[RationalEntry, Tuple[int, ...]], RationalEntry] = {}

    @property
    def zero(self) -> RationalEntry:
        return self.model.zero

    @property
    def one(self) -> RationalEntry:
        return self.model.one

    def twisted(self, entry: RationalEntry, x: WElem) -> RationalEntry:
        key = (entry, x.word)
        found = self._twists.get(key)
        if found is None:
            self.history["twists"] += 1
            found = entry.act(x)
            self._twists[key] = found
        return found

    def euler(self, word, bits) -> RationalEntry:
        return self.model.euler_factor(word, bits)

    def inverse_euler(self, word, bits) -> RationalEntry:
        return self.model.inverse_euler_factor(word, bits)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return not a

    def finish(self, value: RationalEntry) -> RationalEntry:
        if not value.is_polynomial():
            raise AlgebraError(f"pairing value {value} is not a polynomial")
        return value

    def reset(self) -> None:
        super().reset()
        self._twists.clear()


class ModularBackend(PairingBackend):
    """Values at a random point modulo a large prime.

    A degree-zero pairing is an integer; it is recovered as the symmetric
    residue, exact as long as its absolute value is below q / 2.
    """

    def __init__(self, model: LocalizationModel, q: int = constants.MODULAR_PRIME,
                 seed: int = constants.MODULAR_SEED):
        super().__init__(model)
        self.q = q
        self.seed = seed
        self.attempt = 0
        self._twists: Dict[Tuple[RationalEntry, Tuple[int, ...]], int] = {}
        self._points: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        self._euler: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {}
        self._draw()

    def _draw(self) -> None:
        rng = random.Random(self.seed + self.attempt)
        self.point = tuple(rng.randrange(1, self.q) for _ in range(self.model.R.rank))
        self._twists.clear()
        self._points.clear()
        self._euler.clear()

    def redraw(self) -> None:
        """Move to the next evaluation point after a vanishing denominator."""
        self.attempt += 1
        logger.warning("Vanishing denominator at evaluation point; redrawing (attempt %d)", self.attempt)
        self._draw()

    def _point_for(self, x: WElem) -> Tuple[int, ...]:
        found = self._points.get(x.word)
        if found is None:
            # x(f)(P) = f(M_x^T P)
            m = x.dual_matrix
            r = self.model.R.rank
            found = tuple(
                sum(int(m[k, j]) * self.point[k] for k in range(r)) % self.q for j in range(r)
            )
            self._points[x.word] = found
        return found

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def twisted(self, entry: RationalEntry, x: WElem) -> int:
        key = (entry, x.word)
        found = self._twists.get(key)
        if found is None:
            self.history["twists"] += 1
            found = entry.evaluate_mod(self._point_for(x), self.q)
            self._twists[key] = found
        return found

    def _form_value(self, form: Sequence[int]) -> int:
        return sum(int(a) * b for a, b in zip(form, self.point)) % self.q

    def euler(self, word, bits) -> int:
        key = (tuple(word), tuple(bits))
        value = self._euler.get(key)
        if value is None:
            value = 1
            for form in self.model.euler_forms(word, bits):
                value = value * self._form_value(form) % self.q
            self._euler[key] = value
        return value

    def inverse_euler(self, word, bits) -> int:
        value = self.euler(word, bits)
        if value == 0:
            raise SpecializationError("Euler factor vanishes at the evaluation point")
        return pow(value, -1, self.q)

    def add(self, a, b):
        return (a + b) % self.q

    def mul(self, a, b):
        return a * b % self.q

    def is_zero(self, a) -> bool:
        return a % self.q == 0

    def finish(self, value: int) -> int:
        value %= self.q
        return value - self.q if value > self.q // 2 else value

    def reset(self) -> None:
        super().reset()
        self.attempt = 0
        self._draw()
