# File: app/core/modes.py

"""
Piecewise trigonometric/hyperbolic mode shapes on the half-beam.

On a piece [x0, x1] where the density equals q, a solution of
e'''' = lambda * q * e is a combination of

    cos(k (x - x0)), sin(k (x - x0)), exp(-k (x - x0)), exp(k (x - x1))

with k = lambda**(1/4) * q**(1/4). This spans the same space as
cos/sin/cosh/sinh(k x) but every basis function is bounded by one on its
piece, which keeps interface systems well conditioned for large k. The
shape on (-pi, 0) follows from the parity.
"""

from dataclasses import dataclass, field

import numpy as np

from app.core.density import Density
from app.utils.constants import (
    HALF_SPAN,
    ORIENTATION_SAMPLES,
    ORIENTATION_TOLERANCE,
    PARITY_EVEN,
    PARITY_ODD,
)

# |w| below this uses the power series of (exp(w) - 1) / w
_SERIES_RADIUS = 0.1
_SERIES_TERMS = 16


def parity_sign(parity: str) -> float:
    """+1 for even shapes, -1 for odd shapes."""
    return 1.0 if parity == PARITY_EVEN else -1.0


def flip_parity(parity: str) -> str:
    return PARITY_ODD if parity == PARITY_EVEN else PARITY_EVEN


def basis_derivatives(k: np.ndarray, t: np.ndarray, s: np.ndarray, order: int) -> np.ndarray:
    """
    Order-th derivative of the four local basis functions, without the k**order factor.

    Args:
        k: Wavenumbers.
        t: Offsets from the left end of the piece (x - x0).
        s: Offsets from the right end of the piece (x - x1), non-positive.
        order: Derivative order, 0..3 or higher.

    Returns:
        Array with a trailing axis of length 4.
    """
    kt = k * t
    c, sn = np.cos(kt), np.sin(kt)
    quarter = order % 4
    if quarter == 0:
        trig = (c, sn)
    elif quarter == 1:
        trig = (-sn, c)
    elif quarter == 2:
        trig = (-c, -sn)
    else:
        trig = (sn, -c)
    decay = (-1.0) ** order * np.exp(-kt)
    growth = np.exp(k * s)
    return np.stack([trig[0], trig[1], decay, growth], axis=-1)


def _phi1(w: np.ndarray) -> np.ndarray:
    """(exp(w) - 1) / w for complex w with Re(w) <= 0."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < _SERIES_RADIUS
    ws = w[small]
    acc = np.ones_like(ws)
    for n in range(_SERIES_TERMS, 1, -1):
        acc = 1.0 + ws * acc / n
    out[small] = acc
    wl = w[~small]
    out[~small] = (np.exp(wl) - 1.0) / wl
    return out


@dataclass(frozen=True, eq=False)
class ModeShape:
    """
    A parity-extended piecewise solution on (-pi, pi).

    Attributes:
        parity: "even" or "odd".
        nodes: Piece boundaries 0 = x_0 < ... < x_P = pi.
        wavenumbers: k on each piece.
        coefficients: (P, 4) weights of the local basis on each piece.
    """

    parity: str
    nodes: np.ndarray
    wavenumbers: np.ndarray
    coefficients: np.ndarray
    eigenvalue: float | None = field(default=None)

    @property
    def piece_count(self) -> int:
        return len(self.wavenumbers)

    def _locate(self, x_abs: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.nodes, x_abs, side="right") - 1
        return np.clip(idx, 0, self.piece_count - 1)

    def evaluate(self, x: float | np.ndarray, derivative: int = 0) -> float | np.ndarray:
        """
        Evaluate the shape (or one of its derivatives) at |x| <= pi.

        Args:
            x: Scalar or array of abscissae.
            derivative: Derivative order.

        Returns:
            Values with the shape of x.
        """
        if derivative:
            return self.derivative(derivative).evaluate(x)
        x_arr = np.asarray(x, dtype=float)
        x_abs = np.abs(x_arr)
        idx = self._locate(x_abs)
        k = self.wavenumbers[idx]
        t = x_abs - self.nodes[idx]
        s = x_abs - self.nodes[idx + 1]
        values = np.sum(self.coefficients[idx] * basis_derivatives(k, t, s, 0), axis=-1)
        values = np.where(x_arr < 0.0, parity_sign(self.parity) * values, values)
        return float(values) if values.ndim == 0 else values

    __call__ = evaluate

    def derivative(self, order: int = 1) -> "ModeShape":
        """Exact derivative of the given order as a new ModeShape."""
        shape = self
        for _ in range(order):
            k = shape.wavenumbers[:, None]
            a, b, c, d = shape.coefficients.T
            coefficients = k * np.stack([b, -a, -c, d], axis=-1)
            shape = ModeShape(
                parity=flip_parity(shape.parity),
                nodes=shape.nodes,
                wavenumbers=shape.wavenumbers,
                coefficients=coefficients,
                eigenvalue=shape.eigenvalue,
            )
        return shape

    def scaled(self, factor: float) -> "ModeShape":
        return ModeShape(
            parity=self.parity,
            nodes=self.nodes,
            wavenumbers=self.wavenumbers,
            coefficients=self.coefficients * factor,
            eigenvalue=self.eigenvalue,
        )

    def exponential_terms(self, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Rewrite pieces idx as sums c * exp(z (x - r)).

        Returns:
            Complex weights, complex rates and real anchors, each (len(idx), 4).
        """
        a, b, c, d = self.coefficients[idx].T
        k = self.wavenumbers[idx]
        x0 = self.nodes[idx]
        x1 = self.nodes[idx + 1]
        weights = np.stack([(a - 1j * b) / 2.0, (a + 1j * b) / 2.0, c + 0j, d + 0j], axis=-1)
        rates = np.stack([1j * k, -1j * k, -k + 0j, k + 0j], axis=-1)
        anchors = np.stack([x0, x0, x0, x1], axis=-1)
        return weights, rates, anchors

    def inner(self, other: "ModeShape", weight: Density | None = None) -> float:
        """
        Exact integral of weight * self * other over (-pi, pi).

        Args:
            other: Second shape.
            weight: Piecewise-constant density; None means p = 1.

        Returns:
            The integral, zero for shapes of opposite parity.
        """
        if self.parity != other.parity:
            return 0.0
        cuts = [self.nodes, other.nodes]
        if weight is not None:
            cuts.append(np.asarray(weight.nodes, dtype=float))
        grid = np.unique(np.concatenate(cuts))
        grid = grid[(grid >= 0.0) & (grid <= HALF_SPAN)]
        lo, hi = grid[:-1], grid[1:]
        keep = hi - lo > 0.0
        lo, hi = lo[keep], hi[keep]
        mid = 0.5 * (lo + hi)
        w = np.ones_like(mid) if weight is None else np.asarray(weight.evaluate(mid), dtype=float)

        cf, zf, rf = self.exponential_terms(self._locate(mid))
        cg, zg, rg = other.exponential_terms(other._locate(mid))
        rate = zf[:, :, None] + zg[:, None, :]
        coef = cf[:, :, None] * cg[:, None, :]
        length = (hi - lo)[:, None, None]
        grows = rate.real > 0.0
        anchor = np.where(grows, hi[:, None, None], lo[:, None, None])
        base = zf[:, :, None] * (anchor - rf[:, :, None]) + zg[:, None, :] * (anchor - rg[:, None, :])
        ramp = np.where(grows, -rate * length, rate * length)
        pieces = coef * np.exp(base) * length * _phi1(ramp)
        half = np.sum(w * np.sum(pieces, axis=(1, 2)).real)
        return 2.0 * float(half)

    def norm(self, weight: Density | None = None) -> float:
        return float(np.sqrt(self.inner(self, weight)))

    def to_trig_hyperbolic(self) -> np.ndarray:
        """
        Coefficients (A, B, C, D) of cos, sin, cosh, sinh(k x) on each piece.

        May overflow for large k * x; intended for export and inspection.
        """
        a, b, c, d = self.coefficients.T
        k = self.wavenumbers
        x0 = self.nodes[:-1]
        x1 = self.nodes[1:]
        cos0, sin0 = np.cos(k * x0), np.sin(k * x0)
        left = c * np.exp(k * x0)
        right = d * np.exp(-k * x1)
        return np.stack([a * cos0 - b * sin0, a * sin0 + b * cos0, left + right, right - left], axis=-1)


def oriented(shape: ModeShape) -> ModeShape:
    """
    Fix the sign so that e(0) > 0 for even shapes and e'(0) > 0 for odd ones.

    When the reference value is negligible the largest sample on [0, pi]
    decides instead.
    """
    reference = shape if shape.parity == PARITY_EVEN else shape.derivative(1)
    samples = reference.evaluate(np.linspace(0.0, HALF_SPAN, ORIENTATION_SAMPLES))
    value = samples[0]
    peak = np.max(np.abs(samples))
    if abs(value) <= ORIENTATION_TOLERANCE * peak:
        value = samples[np.argmax(np.abs(samples))]
    return shape.scaled(-1.0) if value < 0.0 else shape
