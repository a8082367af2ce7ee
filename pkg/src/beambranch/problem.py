"""Problem instances: grid, coefficient fields, interaction kernel, exponents.

A problem couples the hinged fourth-order operator u'''' - p(x)u'' on (0,1)
with a linear weight a(x) and the interaction term u^rho(x) * int f(x,y)|u(y)|^sigma dy.
Everything is sampled on a uniform grid of n interior nodes; the boundary
values u(0) = u(1) = 0 are implicit and never stored.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    InvalidExponent,
    MalformedConfig,
    ModelAssumptionWarning,
    NegativeData,
)

COEFFICIENT_KINDS = {"constant": 1, "affine": 2, "cosine": 3, "tabulated": None}
KERNEL_KINDS = {"constant": 1, "expdecay": 2, "gaussian": 2, "tabulated": None}


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid on (0,1): nodes x_j = j*h, j = 1..n, h = 1/(n+1)."""

    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 3:
            raise MalformedConfig(f"grid needs at least 3 interior nodes, got n={self.n}")
        h = 1.0 / (self.n + 1)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", _readonly(np.arange(1, self.n + 1) * h))


@dataclass(frozen=True)
class CoefficientField:
    """A scalar coefficient sampled at the grid nodes."""

    kind: str
    params: tuple
    samples: np.ndarray


@dataclass(frozen=True)
class KernelField:
    """An interaction kernel f(x,y) sampled as the matrix F[i,j] = f(x_i, x_j)."""

    kind: str
    params: tuple
    samples: np.ndarray


@dataclass(frozen=True)
class ProblemSpec:
    """One fully sampled problem instance. Immutable after construction."""

    grid: Grid
    p: CoefficientField
    a: CoefficientField
    f: KernelField
    rho: float
    sigma: float


def sample_function(kind: str, params: Sequence[float], grid: Grid) -> np.ndarray:
    """Evaluate a coefficient description at the grid nodes.

    Kinds: constant:v | affine:v0,v1 -> v0 + v1*x | cosine:c0,c1,k -> c0 + c1*cos(k*pi*x)
    | tabulated:(n values, passed through unchanged).
    """
    x = grid.nodes
    if kind == "constant":
        (v,) = params
        return np.full(grid.n, float(v))
    if kind == "affine":
        v0, v1 = params
        return v0 + v1 * x
    if kind == "cosine":
        c0, c1, k = params
        return c0 + c1 * np.cos(k * np.pi * x)
    if kind == "tabulated":
        vals = np.asarray(params, dtype=float).ravel()
        if vals.size != grid.n:
            raise ArityMismatch(f"tabulated field has {vals.size} values, grid has n={grid.n}")
        return vals.copy()
    raise MalformedConfig(f"unknown coefficient kind {kind!r}")


def sample_kernel(kind: str, params: Sequence[float], grid: Grid) -> np.ndarray:
    """Evaluate a kernel description on the grid, returning the n-by-n matrix."""
    x = grid.nodes
    dx = x[:, None] - x[None, :]
    if kind == "constant":
        (c,) = params
        return np.full((grid.n, grid.n), float(c))
    if kind == "expdecay":
        c, alpha = params
        return c * np.exp(-alpha * np.abs(dx))
    if kind == "gaussian":
        c, alpha = params
        return c * np.exp(-alpha * dx * dx)
    if kind == "tabulated":
        vals = np.asarray(params, dtype=float).ravel()
        if vals.size != grid.n * grid.n:
            raise ArityMismatch(
                f"tabulated kernel has {vals.size} values, grid needs n*n={grid.n * grid.n}"
            )
        return vals.reshape(grid.n, grid.n).copy()
    raise MalformedConfig(f"unknown kernel kind {kind!r}")


def _parse_field_value(value) -> tuple[str, list[float]]:
    """Split 'kind:p1,p2,...' (or an already-split (kind, values) pair)."""
    if isinstance(value, tuple) and len(value) == 2:
        kind, vals = value
        return str(kind), list(np.asarray(vals, dtype=float).ravel())
    text = str(value).strip()
    kind, sep, rest = text.partition(":")
    kind = kind.strip()
    if not sep or not rest.strip():
        raise MalformedConfig(f"field value {text!r} is not of the form kind:params")
    try:
        params = [float(tok) for tok in rest.split(",")]
    except ValueError as exc:
        raise MalformedConfig(f"non-numeric parameter in {text!r}") from exc
    return kind, params


def _check_arity(kind: str, params: list[float], table: dict, what: str) -> None:
    if kind not in table:
        raise MalformedConfig(f"unknown {what} kind {kind!r}")
    want = table[kind]
    if want is not None and len(params) != want:
        raise MalformedConfig(f"{what} kind {kind!r} takes {want} parameters, got {len(params)}")


def _get_number(config: Mapping, key: str) -> float:
    if key not in config:
        raise MalformedConfig(f"missing config key {key!r}")
    try:
        return float(config[key])
    except (TypeError, ValueError) as exc:
        raise MalformedConfig(f"config key {key!r} is not numeric: {config[key]!r}") from exc


def build_problem(config: Mapping, n: int | None = None) -> ProblemSpec:
    """Assemble and validate a ProblemSpec from a flat key-value description.

    Required keys: n, rho, sigma, p, a, f. An explicit `n` argument overrides
    the config value. Rejects rho < 1, sigma <= 0, negative weight samples,
    and negative kernel samples.
    """
    if n is None:
        n = int(_get_number(config, "n"))
    grid = Grid(int(n))

    rho = _get_number(config, "rho")
    sigma = _get_number(config, "sigma")
    if rho < 1.0:
        raise InvalidExponent(f"rho must be >= 1, got {rho}")
    if sigma <= 0.0:
        raise InvalidExponent(f"sigma must be > 0, got {sigma}")
    if rho == 1.0:
        warnings.warn(
            "rho = 1: superlinearity of the interaction term rests on sigma > 0 alone",
            ModelAssumptionWarning,
            stacklevel=2,
        )

    fields = {}
    for key in ("p", "a"):
        if key not in config:
            raise MalformedConfig(f"missing config key {key!r}")
        kind, params = _parse_field_value(config[key])
        _check_arity(kind, params, COEFFICIENT_KINDS, "coefficient")
        samples = sample_function(kind, params, grid)
        fields[key] = CoefficientField(kind, tuple(np.atleast_1d(params)), _readonly(samples))

    if "f" not in config:
        raise MalformedConfig("missing config key 'f'")
    fkind, fparams = _parse_field_value(config["f"])
    _check_arity(fkind, fparams, KERNEL_KINDS, "kernel")
    fsamples = sample_kernel(fkind, fparams, grid)

    if np.min(fields["a"].samples) < 0.0:
        raise NegativeData(f"weight a has a negative sample (min {np.min(fields['a'].samples)})")
    if np.min(fsamples) < 0.0:
        raise NegativeData(f"kernel f has a negative sample (min {np.min(fsamples)})")

    return ProblemSpec(
        grid=grid,
        p=fields["p"],
        a=fields["a"],
        f=KernelField(fkind, tuple(np.atleast_1d(fparams)), _readonly(fsamples)),
        rho=float(rho),
        sigma=float(sigma),
    )


def parse_config(text: str) -> dict:
    """Parse the line-oriented `key = value` config format into a dict.

    Blank lines and lines starting with '#' are ignored.
    """
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise MalformedConfig(f"line {lineno}: expected 'key = value', got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def load_config(path) -> dict:
    """Read a config file, resolving `kind:@file` tabulated references.

    Referenced data files are whitespace-separated numeric text, resolved
    relative to the directory containing the config file.
    """
    path = Path(path)
    config = parse_config(path.read_text())
    for key in ("p", "a", "f"):
        value = config.get(key)
        if isinstance(value, str) and "@" in value:
            kind, sep, ref = value.partition(":")
            ref = ref.strip()
            if not sep or not ref.startswith("@"):
                raise MalformedConfig(f"bad tabulated reference {value!r}")
            data_path = path.parent / ref[1:]
            try:
                numbers = [float(tok) for tok in data_path.read_text().split()]
            except OSError as exc:
                raise MalformedConfig(f"cannot read data file {data_path}") from exc
            except ValueError as exc:
                raise MalformedConfig(f"non-numeric data in {data_path}") from exc
            config[key] = (kind.strip(), numbers)
    return config
