"""
M 的 8 維整數零空間
基底 X_ijk = ε_i ⊗ ε_j ⊗ ε_k，ε1 = (1, 0, −1)，ε2 = (0, 1, −1)
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from src.errors import NotInNullSpace, OutOfRange
from src.generators.block_generator import VARIABLE_COUNT, Vector, coefficient_matrix, var_index

# 3×2，兩行分別是 ε1、ε2
EPSILON = np.array([[1, 0], [0, 1], [-1, -1]], dtype=np.int64)

BASIS_LABELS = ('111', '112', '121', '122', '211', '212', '221', '222')
COEFFICIENT_NAMES = ('a', 'b', 'c', 'd', "a'", "b'", "c'", "d'")

# 三個分量都在 {1,2} 的位置；在這些列上 C 等於單位矩陣
FREE_POSITIONS: Tuple[int, ...] = tuple(var_index(t) for t in itertools.product((1, 2), repeat=3))


class NullCoefficients(NamedTuple):
    """零空間係數 (a, b, c, d, a′, b′, c′, d′)"""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    a_prime: int = 0
    b_prime: int = 0
    c_prime: int = 0
    d_prime: int = 0

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self) + ")"


@dataclass(frozen=True, eq=False)
class NullBasis:
    """8 個 27 維基底向量，也就是矩陣 C 的各行"""

    matrix: np.ndarray

    @property
    def vectors(self) -> List[Vector]:
        return [tuple(int(v) for v in column) for column in self.matrix.T]

    def __len__(self) -> int:
        return self.matrix.shape[1]


@lru_cache(maxsize=None)
def null_basis_matrix() -> np.ndarray:
    """C = A ⊗ A ⊗ A，A = [ε1 ε2]（27×8）"""
    C = np.kron(EPSILON, np.kron(EPSILON, EPSILON))
    C.setflags(write=False)
    return C


def null_basis() -> NullBasis:
    return NullBasis(matrix=null_basis_matrix())


def expand(n: Sequence[int]) -> Vector:
    """Σ n_i · X_i"""
    if len(n) != len(BASIS_LABELS):
        raise OutOfRange(f"需要 8 個係數: {tuple(n)}")
    values = null_basis_matrix() @ np.asarray(n, dtype=np.int64)
    return tuple(int(v) for v in values)


def coefficients_of(v: Sequence[int]) -> NullCoefficients:
    """expand 的反函數；v 必須滿足 M·v = 0"""
    vec = np.asarray(v, dtype=np.int64)
    if vec.shape != (VARIABLE_COUNT,):
        raise OutOfRange(f"需要 27 維向量，得到形狀 {vec.shape}")
    if np.any(coefficient_matrix() @ vec):
        raise NotInNullSpace("M·v ≠ 0")
    return NullCoefficients(*(int(vec[k - 1]) for k in FREE_POSITIONS))


def coefficient_between(x: Sequence[int], base: Sequence[int]) -> NullCoefficients:
    """x − base 的零空間座標"""
    return coefficients_of(np.asarray(x, dtype=np.int64) - np.asarray(base, dtype=np.int64))


@dataclass(frozen=True)
class Functional:
    """非負條件 x_p(k) + Σ coeffs·n ≥ 0"""

    index: int
    coeffs: Tuple[int, ...]
    constant: int

    def value(self, n: Sequence[int]) -> int:
        return self.constant + sum(c * v for c, v in zip(self.coeffs, n))


def affine_functionals(x_p: Sequence[int]) -> List[Functional]:
    """27 個仿射條件 E1..E27"""
    C = null_basis_matrix()
    return [
        Functional(index=k + 1, coeffs=tuple(int(c) for c in C[k]), constant=int(x_p[k]))
        for k in range(VARIABLE_COUNT)
    ]


def render_functional(functional: Functional) -> str:
    """以 a, b, …, d′ 記號顯示，例如 "E3) a+b ≤ 0" """
    terms = [name for name, c in zip(COEFFICIENT_NAMES, functional.coeffs) if c]
    signs = {c for c in functional.coeffs if c}
    expression = "+".join(terms)
    if signs == {1}:
        return f"E{functional.index}) {expression} ≥ {-functional.constant}"
    return f"E{functional.index}) {expression} ≤ {functional.constant}"
