"""Slowly varying scale functions L with exact inverses.

Every L here is strictly increasing and continuous on [0, inf) with
L(0) = 0 and L(x) -> inf, so the inverse is a genuine function.  Inputs
live in log scale (LogNum), because the x at which these functions get
interesting (exp(1e4) and beyond) are unrepresentable directly; outputs
are ordinary floats, since slow variation keeps them in double range for
any input the experiments produce.

Three families are provided:

- ``logpow`` (beta > 0):  L(x) = (log(1+x))**beta, closed-form inverse.
- ``loglog``:             L(x) = log(1 + log(1+x)), closed-form inverse.
- representation-built:   L1(x) = c * e**b * (exp(I(x)) - 1) with
  I(x) = integral of eps1(u)/u over (0, x], where eps1 equals u on [0,1],
  the configured eps where it is positive, and 1/u where eps vanishes;
  b re-normalizes so that L1 tracks the function the eps represents.

The loglog family saturates: an inverse whose log exceeds double range is
returned as +inf, which stays order-correct against any representable
threshold but loses the value itself.  Consumers that need L of such a
sum must treat non-finite results as out of the family's supported range.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np

from slowshot.errors import NumericError
from slowshot.lognum import LogNum

_NEG_INF = float("-inf")
_INF = float("inf")


# ---------------------------------------------------------------------------
# stable scalar/vector helpers
# ---------------------------------------------------------------------------

def softplus(v: float) -> float:
    """log(1 + e**v), i.e. log(1+x) given v = log x."""
    if v == _NEG_INF:
        return 0.0
    if v > 0:
        return v + math.log1p(math.exp(-v))
    return math.log1p(math.exp(v))


def softplus_array(v: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, v)


def log_expm1(z: float) -> float:
    """log(e**z - 1) for z >= 0; -inf at z = 0, ~z for large z."""
    if z < 0:
        raise ValueError(f"log_expm1 needs z >= 0, got {z!r}")
    if z == 0.0:
        return _NEG_INF
    if z > 33.0:
        return z + math.log1p(-math.exp(-z)) if z < 745.0 else z
    return math.log(math.expm1(z))


def log_expm1_array(z: np.ndarray) -> np.ndarray:
    out = np.asarray(z, dtype=float).copy()
    small = out <= 33.0
    if np.any(small):
        with np.errstate(divide="ignore"):
            out[small] = np.log(np.expm1(out[small]))
    mid = ~small & (out < 745.0)
    if np.any(mid):
        out[mid] = out[mid] + np.log1p(-np.exp(-out[mid]))
    # beyond ~745, e**-z underflows: log(e**z - 1) == z to double precision
    return out


# ---------------------------------------------------------------------------
# base class
# ---------------------------------------------------------------------------

class SlowVaryFn:
    """A strictly increasing continuous slowly varying function with inverse."""

    kind: str = "abstract"

    @property
    def spec_string(self) -> str:
        raise NotImplementedError

    # log-domain core (v = log x); subclasses implement these four
    def eval_logx(self, v: float) -> float:
        raise NotImplementedError

    def eval_logx_array(self, v: np.ndarray) -> np.ndarray:
        return np.array([self.eval_logx(float(x)) for x in np.asarray(v, dtype=float)])

    def inverse_log(self, y: float) -> float:
        raise NotImplementedError

    def inverse_log_array(self, y: np.ndarray) -> np.ndarray:
        return np.array([self.inverse_log(float(x)) for x in np.asarray(y, dtype=float)])

    # LogNum-facing surface
    def value(self, x: LogNum) -> float:
        return self.eval_logx(x.log_value)

    def inverse(self, y: float) -> LogNum:
        return LogNum(self.inverse_log(y))

    def __call__(self, x: LogNum) -> float:
        return self.value(x)

    @staticmethod
    def _check_inverse_arg(y: float) -> None:
        if not (y >= 0):
            raise ValueError(f"inverse argument must be >= 0, got {y!r}")


# ---------------------------------------------------------------------------
# canonical families
# ---------------------------------------------------------------------------

class LogPow(SlowVaryFn):
    """L(x) = (log(1+x))**beta."""

    kind = "logpow"

    def __init__(self, beta: float):
        if not beta > 0:
            raise ValueError(f"logpow exponent must be positive, got {beta!r}")
        self.beta = float(beta)

    @property
    def spec_string(self) -> str:
        return f"logpow:{self.beta:g}"

    def eval_logx(self, v: float) -> float:
        w = softplus(v)
        return w if self.beta == 1.0 else math.pow(w, self.beta)

    def eval_logx_array(self, v: np.ndarray) -> np.ndarray:
        w = softplus_array(np.asarray(v, dtype=float))
        return w if self.beta == 1.0 else np.power(w, self.beta)

    def inverse_log(self, y: float) -> float:
        self._check_inverse_arg(y)
        if y == 0.0:
            return _NEG_INF
        z = y if self.beta == 1.0 else math.pow(y, 1.0 / self.beta)
        return log_expm1(z)

    def inverse_log_array(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        z = y if self.beta == 1.0 else np.power(y, 1.0 / self.beta)
        return log_expm1_array(z)


class LogLog(SlowVaryFn):
    """L(x) = log(1 + log(1+x))."""

    kind = "loglog"

    @property
    def spec_string(self) -> str:
        return "loglog"

    def eval_logx(self, v: float) -> float:
        return math.log1p(softplus(v))

    def eval_logx_array(self, v: np.ndarray) -> np.ndarray:
        return np.log1p(softplus_array(np.asarray(v, dtype=float)))

    def inverse_log(self, y: float) -> float:
        self._check_inverse_arg(y)
        if y == 0.0:
            return _NEG_INF
        if y > 709.7:
            return _INF  # log of the true inverse exceeds double range
        return log_expm1(math.expm1(y))

    def inverse_log_array(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        out = np.full(y.shape, _INF)
        ok = y <= 709.7
        out[ok] = log_expm1_array(np.expm1(y[ok]))
        out[y == 0.0] = _NEG_INF
        return out


# ---------------------------------------------------------------------------
# representation-built family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonPreset:
    """A nonnegative eps(u) -> 0, given piecewise on (1, inf).

    ``pieces`` lists (u_lo, u_hi, f) intervals in increasing order covering
    (1, inf); f evaluates eps at u = e**v from v = log u (quadrature nodes
    reach log u ~ 1e18, far past what exp() can represent), or is None
    where eps is identically zero (there the regularized eps1 becomes 1/u
    and all integrals are analytic).  Below u = 1 eps coincides with u
    itself, matching the regularization, so that region never needs
    quadrature.
    """

    name: str
    pieces: Tuple[Tuple[float, float, Optional[Callable[[float], float]]], ...]

    def validate(self) -> None:
        lo = 1.0
        for a, b, f in self.pieces:
            if a != lo or not (b > a):
                raise ValueError(f"eps pieces must tile (1, inf): bad piece ({a}, {b})")
            lo = b
            if f is not None:
                va = math.log(a)
                vb = math.log(b) if b != _INF else 1e6
                for v in np.linspace(va, vb, 64):
                    if f(float(v)) < 0:
                        raise ValueError(f"eps must be nonnegative (preset {self.name})")
        if lo != _INF:
            raise ValueError("eps pieces must extend to infinity")


def _eps_inv_log_logu(v: float) -> float:
    """eps(u) = 1/log(e + u) evaluated from v = log u."""
    if v > 1.0:
        return 1.0 / (v + math.log1p(math.exp(1.0 - v)))
    return 1.0 / (1.0 + math.log1p(math.exp(v - 1.0)))


EPSILON_PRESETS = {
    "inv_log": EpsilonPreset("inv_log", ((1.0, _INF, _eps_inv_log_logu),)),
    "inv_log_gapped": EpsilonPreset(
        "inv_log_gapped", ((1.0, 10.0, None), (10.0, _INF, _eps_inv_log_logu))
    ),
}


@dataclass(frozen=True)
class QuadratureConfig:
    tol: float = 1e-11
    max_depth: int = 48
    cutoff_log: float = 1e18  # largest log x the cached integral covers


@dataclass(frozen=True)
class RepresentationSpec:
    """Ingredients of a representation-built function.  Only a constant
    c is exposed (a c(x) with a positive limit adds nothing to what the
    construction can represent and would break the exact ratio identity
    the tests rely on)."""

    c: float
    epsilon: EpsilonPreset
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def validate(self) -> None:
        if not self.c > 0:
            raise ValueError(f"representation constant c must be positive, got {self.c!r}")
        self.epsilon.validate()


def _adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int
) -> float:
    """Adaptive composite Simpson with Richardson correction."""
    if b <= a:
        return 0.0

    def simpson(x0: float, x2: float, f0: float, f1: float, f2: float) -> float:
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        if depth <= 0:
            raise NumericError(
                f"adaptive Simpson failed to converge on [{x0}, {x2}] (tol {tol})"
            )
        half = 0.5 * eps
        return recurse(x0, xm, f0, fl, f1, left, half, depth - 1) + recurse(
            xm, x2, f1, fr, f2, right, half, depth - 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, max_depth)


class _PositivePieceCache:
    """Cumulative integral of eps(e**v) dv over one positive piece,
    pre-tabulated on a doubling ladder of v-nodes so later evaluations
    only integrate a short final segment."""

    def __init__(self, v_lo: float, v_hi: float, f, quad: QuadratureConfig):
        self.v_lo = v_lo
        self.v_hi = v_hi
        self._g = f  # eps as a function of v = log u
        self._quad = quad
        nodes = [v_lo]
        step = 1.0
        while nodes[-1] < v_hi:
            nodes.append(min(nodes[-1] + step, v_hi))
            step *= 2.0
        self.nodes = np.array(nodes)
        cum = [0.0]
        for lo, hi in zip(nodes[:-1], nodes[1:]):
            cum.append(cum[-1] + _adaptive_simpson(self._g, lo, hi, quad.tol, quad.max_depth))
        self.cum = np.array(cum)

    def integral_to(self, v: float) -> float:
        """Integral of eps(e**s) ds over [v_lo, min(v, v_hi)]."""
        if v <= self.v_lo:
            return 0.0
        v = min(v, self.v_hi)
        j = int(np.searchsorted(self.nodes, v, side="right")) - 1
        base = float(self.cum[j])
        lo = float(self.nodes[j])
        if v > lo:
            base += _adaptive_simpson(self._g, lo, v, self._quad.tol, self._quad.max_depth)
        return base


class RepresentationBuilt(SlowVaryFn):
    """L1(x) = c * e**b * (exp(I(x)) - 1) built from a RepresentationSpec."""

    kind = "representation"

    def __init__(self, spec: RepresentationSpec, source: str = ""):
        spec.validate()
        self.spec = spec
        self._source = source
        quad = spec.quadrature
        self._v_cut = quad.cutoff_log
        self._caches: List[Tuple[float, float, Optional[_PositivePieceCache]]] = []
        b = 0.0
        for a, hi, f in spec.epsilon.pieces:
            va, vb = math.log(a), (math.log(hi) if hi != _INF else _INF)
            if f is None:
                # eps == 0 here, eps1 = 1/u: contribution to b is the exact
                # -(1/a - 1/hi) from the u**-2 integrand (tail bound analytic)
                b -= (1.0 / a) - (0.0 if hi == _INF else 1.0 / hi)
                self._caches.append((va, vb, None))
            else:
                cache = _PositivePieceCache(va, min(vb, self._v_cut), f, quad)
                self._caches.append((va, vb, cache))
        self.b = b
        self._scale = spec.c * math.exp(b)
        self._check_divergence()

    @property
    def spec_string(self) -> str:
        return self._source or f"repr:{self.spec.epsilon.name}"

    def _check_divergence(self) -> None:
        full = self._integral_pieces(self._v_cut)
        half = self._integral_pieces(0.5 * self._v_cut)
        if full - half < 1e-6:
            warnings.warn(
                "integral of eps1(u)/u appears to converge out to the cutoff; "
                "the built function may stay bounded",
                stacklevel=3,
            )

    def _integral_pieces(self, v: float) -> float:
        """Integral of eps1(u)/u over (1, e**v]."""
        if v > self._v_cut:
            raise NumericError(
                f"log x = {v!r} beyond quadrature cutoff {self._v_cut!r}"
            )
        total = 0.0
        for (va, vb, cache) in self._caches:
            if v <= va:
                break
            hi = min(v, vb)
            if cache is None:
                # integral of u**-2 du = 1/a - 1/b, in v coordinates e**-v
                total += math.exp(-va) - math.exp(-hi)
            else:
                total += cache.integral_to(hi)
        return total

    def _exponent(self, v: float) -> float:
        """I(x) = integral of eps1(u)/u over (0, x], v = log x."""
        if v == _NEG_INF:
            return 0.0
        if v <= 0.0:
            return math.exp(v)  # eps1(u) = u below 1, so the integral is x itself
        return 1.0 + self._integral_pieces(v)

    def eval_logx(self, v: float) -> float:
        out = self._scale * math.expm1(self._exponent(v))
        if not math.isfinite(out) and v != _NEG_INF:
            raise NumericError(f"representation-built L overflowed at log x = {v!r}")
        return out

    def exponent_integral(self, x: LogNum) -> float:
        """I(x) itself; exposed because the ratio identity tests need it."""
        return self._exponent(x.log_value)

    def exponent_logx(self, v: float) -> float:
        """I(x) for v = log x."""
        return self._exponent(v)

    def reference_exponent_logx(self, v: float) -> float:
        """Integral of the raw eps(u)/u over (0, x], v = log x.  Differs
        from the built exponent exactly on the regions where eps vanishes,
        which is what the ratio-convergence checks compare against."""
        if v == _NEG_INF:
            return 0.0
        if v <= 0.0:
            return math.exp(v)
        total = 1.0
        for (va, vb, cache) in self._caches:
            if v <= va:
                break
            if cache is not None:
                total += cache.integral_to(min(v, vb))
        return total

    def inverse_log(self, y: float) -> float:
        self._check_inverse_arg(y)
        if y == 0.0:
            return _NEG_INF
        at_one = self._scale * math.expm1(1.0)
        if y <= at_one:
            # below x = 1 the exponent is exactly x: solve analytically
            x = math.log1p(y / self._scale)
            return math.log(x)
        lo, hi = 0.0, 1.0
        for _ in range(80):
            if self.eval_logx(hi) >= y:
                break
            lo, hi = hi, hi * 2.0
        else:
            raise NumericError(f"bisection bracket for inverse({y!r}) not found")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if hi - lo <= 1e-12 * max(1.0, abs(mid)):
                return mid
            if self.eval_logx(mid) < y:
                lo = mid
            else:
                hi = mid
        raise NumericError(f"bisection for inverse({y!r}) exceeded iteration budget")


# ---------------------------------------------------------------------------
# factories and CLI spec strings
# ---------------------------------------------------------------------------

def sv_canonical(tag: str, beta: Optional[float] = None) -> SlowVaryFn:
    if tag == "logpow":
        if beta is None:
            raise ValueError("logpow requires an exponent")
        return LogPow(beta)
    if tag == "loglog":
        return LogLog()
    raise ValueError(f"unknown canonical family {tag!r}")


def build_from_representation(spec: RepresentationSpec, source: str = "") -> RepresentationBuilt:
    return RepresentationBuilt(spec, source=source)


def _parse_repr_file(path: Path) -> RepresentationSpec:
    c = 1.0
    preset = None
    tol, max_depth, cutoff = 1e-11, 48, 1e18
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key == "c":
            c = float(val)
        elif key == "epsilon":
            if val not in EPSILON_PRESETS:
                raise ValueError(
                    f"{path}:{lineno}: unknown epsilon preset {val!r} "
                    f"(have {sorted(EPSILON_PRESETS)})"
                )
            preset = EPSILON_PRESETS[val]
        elif key == "quad_tol":
            tol = float(val)
        elif key == "quad_max_depth":
            max_depth = int(val)
        elif key == "cutoff_log":
            cutoff = float(val)
        else:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if preset is None:
        raise ValueError(f"{path}: missing 'epsilon = <preset>' line")
    return RepresentationSpec(c, preset, QuadratureConfig(tol, max_depth, cutoff))


def parse_sv_spec(text: str) -> SlowVaryFn:
    """Parse CLI-style L specifications: "logpow:<beta>", "loglog",
    "repr:<path-to-spec-file>"."""
    text = text.strip()
    if text == "loglog":
        return LogLog()
    if text.startswith("logpow:"):
        return LogPow(float(text.split(":", 1)[1]))
    if text.startswith("repr:"):
        path = Path(text.split(":", 1)[1])
        if not path.exists():
            raise ValueError(f"representation spec file not found: {path}")
        return build_from_representation(_parse_repr_file(path), source=text)
    raise ValueError(f"unrecognized L specification {text!r}")
