"""Convergence sweeps: config parsing, problem construction, CSV output, order fits."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np
import yaml

from .baselines import bss_product, skew_family, trotter_product
from .families import FAMILY_KINDS, Decomposition, assemble_decomposition, make_family
from .oracle import stone_propagator
from .quasi_feynman import DEFAULT_EULER_POWER, DEFAULT_SERIES_ORDER, DEFAULT_TERM_CAP
from .quasi_feynman import binomial_formula, chernoff_iterate, series_formula

PROBLEM_KINDS = ("pauli", "random_hermitian", "laplacian_plus_potential")
METHODS = ("qf_exp", "qf_series", "qf_binomial", "trotter", "bss")
CSV_HEADER = ("method", "t", "n", "oracle_error", "norm_drift", "seconds")

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


class ConfigError(ValueError):
    """Rejected sweep configuration."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ProblemSpec:
    kind: str
    dim: int
    seed: int = 0
    potential: tuple[float, ...] | None = None


@dataclass(frozen=True)
class SweepConfig:
    problem: ProblemSpec
    coefficients: tuple[float, ...]
    families: tuple[str, ...]
    t: float
    n_values: tuple[int, ...]
    methods: tuple[str, ...]
    series_j: int = DEFAULT_SERIES_ORDER
    binomial_p: int = DEFAULT_EULER_POWER
    term_cap: int = DEFAULT_TERM_CAP
    csv_path: str | None = None
    base_dir: Path = field(default=Path("."), compare=False)

    def resolved_csv_path(self) -> Path | None:
        if self.csv_path is None:
            return None
        path = Path(self.csv_path)
        return path if path.is_absolute() else self.base_dir / path


_SCHEMA = {
    "problem": {"kind", "dim", "seed", "potential"},
    "decomposition": {"coefficients", "families"},
    "sweep": {"t", "n_values", "methods"},
    "formula": {"series_j", "binomial_p", "term_cap"},
    "output": {"csv_path"},
}
_REQUIRED = {
    "problem": {"kind", "dim"},
    "decomposition": {"coefficients", "families"},
    "sweep": {"t", "n_values", "methods"},
}


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def _float(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    return float(value)


def parse_config(data: dict, base_dir: Path | str = ".") -> SweepConfig:
    """Validate a config mapping; unknown sections or keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    for section, body in data.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section {section!r}")
        if not isinstance(body, dict):
            raise ConfigError(f"section {section!r} must be a mapping")
        extra = set(body) - _SCHEMA[section]
        if extra:
            raise ConfigError(f"unknown key(s) in {section}: {sorted(extra)}")
    for section, keys in _REQUIRED.items():
        missing = keys - set(data.get(section, {}))
        if missing:
            raise ConfigError(f"missing key(s) in {section}: {sorted(missing)}")

    prob = data["problem"]
    kind = prob["kind"]
    if kind not in PROBLEM_KINDS:
        raise ConfigError(f"problem.kind must be one of {PROBLEM_KINDS}, got {kind!r}")
    dim = _int(prob["dim"], "problem.dim")
    if dim < 1:
        raise ConfigError("problem.dim must be positive")
    seed = _int(prob.get("seed", 0), "problem.seed")
    potential = prob.get("potential")
    if potential is not None:
        if kind != "laplacian_plus_potential":
            raise ConfigError("problem.potential only applies to laplacian_plus_potential")
        if not isinstance(potential, list) or len(potential) != dim:
            raise ConfigError(f"problem.potential must be a list of {dim} numbers")
        potential = tuple(_float(v, "problem.potential[]") for v in potential)

    dec = data["decomposition"]
    coeffs = dec["coefficients"]
    fams = dec["families"]
    if not isinstance(coeffs, list) or not coeffs:
        raise ConfigError("decomposition.coefficients must be a non-empty list")
    coeffs = tuple(_float(a, "decomposition.coefficients[]") for a in coeffs)
    if isinstance(fams, str):
        fams = [fams] * len(coeffs)
    if not isinstance(fams, list) or len(fams) != len(coeffs):
        raise ConfigError("decomposition.families must list one kind per coefficient")
    for k in fams:
        if k not in FAMILY_KINDS:
            raise ConfigError(f"unknown family kind {k!r}; expected one of {FAMILY_KINDS}")

    sw = data["sweep"]
    t = _float(sw["t"], "sweep.t")
    n_values = sw["n_values"]
    if not isinstance(n_values, list) or not n_values:
        raise ConfigError("sweep.n_values must be a non-empty list")
    n_values = tuple(_int(n, "sweep.n_values[]") for n in n_values)
    if n_values[0] < 1 or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ConfigError("sweep.n_values must be strictly increasing positive integers")
    methods = sw["methods"]
    if not isinstance(methods, list) or not methods:
        raise ConfigError("sweep.methods must be a non-empty list")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; expected a subset of {METHODS}")
    if len(set(methods)) != len(methods):
        raise ConfigError("sweep.methods has duplicates")

    form = data.get("formula", {})
    series_j = _int(form.get("series_j", DEFAULT_SERIES_ORDER), "formula.series_j")
    binomial_p = _int(form.get("binomial_p", DEFAULT_EULER_POWER), "formula.binomial_p")
    term_cap = _int(form.get("term_cap", DEFAULT_TERM_CAP), "formula.term_cap")
    if series_j < 0 or binomial_p < 1 or term_cap < 1:
        raise ConfigError("formula values out of range")

    csv_path = data.get("output", {}).get("csv_path")
    if csv_path is not None and not isinstance(csv_path, str):
        raise ConfigError("output.csv_path must be a string")

    return SweepConfig(
        problem=ProblemSpec(kind, dim, seed, potential),
        coefficients=coeffs,
        families=tuple(fams),
        t=t,
        n_values=n_values,
        methods=tuple(methods),
        series_j=series_j,
        binomial_p=binomial_p,
        term_cap=term_cap,
        csv_path=csv_path,
        base_dir=Path(base_dir),
    )


def load_config(path: str | Path) -> SweepConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data, base_dir=path.parent)


# ---------------------------------------------------------------------------
# problems


def random_hermitian(dim: int, rng: np.random.Generator, norm: float = 1.0) -> np.ndarray:
    """Hermitian matrix from a complex Gaussian draw, rescaled to a given spectral norm."""
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = 0.5 * (X + X.conj().T)
    return norm * H / np.linalg.norm(H, 2)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def periodic_laplacian(dim: int, length: float = 2 * np.pi) -> np.ndarray:
    """Second-difference Laplacian on a periodic grid of ``dim`` points."""
    h = length / dim
    D = -2.0 * np.eye(dim)
    D += np.roll(np.eye(dim), 1, axis=1) + np.roll(np.eye(dim), -1, axis=1)
    return (D / h**2).astype(np.complex128)


def problem_terms(spec: ProblemSpec, m: int) -> tuple[list[np.ndarray], np.ndarray]:
    """Generator terms ``L_1..L_m`` and the unit initial state for a problem spec."""
    d = spec.dim
    if spec.kind == "pauli":
        if d != 2:
            raise ConfigError("pauli problems have dim 2")
        if m > 3:
            raise ConfigError("pauli problems support at most 3 terms")
        return [SIGMA_Z, SIGMA_X, SIGMA_Y][:m], np.array([1, 0], dtype=np.complex128)
    if spec.kind == "random_hermitian":
        rng = np.random.default_rng(spec.seed)
        terms = [random_hermitian(d, rng) for _ in range(m)]
        return terms, random_state(d, rng)
    if m != 2:
        raise ConfigError("laplacian_plus_potential uses exactly two terms (Laplacian, potential)")
    V = np.zeros(d) if spec.potential is None else np.asarray(spec.potential, dtype=float)
    x = np.arange(d) * (2 * np.pi / d)
    psi = np.exp(-((x - np.pi) ** 2)) * np.exp(1j * x)
    psi = psi / np.linalg.norm(psi)
    return [periodic_laplacian(d), np.diag(V).astype(np.complex128)], psi


def build_problem(cfg: SweepConfig) -> tuple[Decomposition, np.ndarray]:
    """Deterministic decomposition and normalized initial state for ``cfg``.

    Family ranges are set to ``|t| / min(n_values)``, the largest step the
    sweep takes.
    """
    m = len(cfg.coefficients)
    terms, psi0 = problem_terms(cfg.problem, m)
    t_max = abs(cfg.t) / cfg.n_values[0] if cfg.t != 0 else 1.0
    try:
        fams = [
            make_family(kind, L, t_max=t_max, label=f"{kind}[{k + 1}]")
            for k, (kind, L) in enumerate(zip(cfg.families, terms))
        ]
        dec = assemble_decomposition(cfg.coefficients, fams)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return dec, psi0


# ---------------------------------------------------------------------------
# sweeps


class SweepRow(NamedTuple):
    method: str
    t: float
    n: int
    oracle_error: float
    norm_drift: float
    seconds: float


@dataclass
class ConvergenceReport:
    rows: list[SweepRow]
    fitted_order: dict[str, float | str]
    failures: list[tuple[str, int, str]] = field(default_factory=list)

    def column(self, method: str, name: str) -> list:
        return [getattr(r, name) for r in self.rows if r.method == method]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.method, repr(r.t), r.n, repr(r.oracle_error), repr(r.norm_drift), f"{r.seconds:.6f}"])
        return buf.getvalue()


def _approximate(method: str, cfg: SweepConfig, dec: Decomposition, psi0, n: int, bss_fams):
    t = cfg.t
    if method == "qf_exp":
        return chernoff_iterate(dec, t, n, psi0)
    if method == "qf_series":
        return series_formula(dec, t, n, cfg.series_j, psi0, cfg.term_cap).state
    if method == "qf_binomial":
        return binomial_formula(dec, t, n, cfg.binomial_p, psi0, cfg.term_cap).state
    if method == "trotter":
        return trotter_product(dec, t, n, psi0)
    return bss_product(bss_fams, t, n, psi0)


def run_sweep(cfg: SweepConfig, write_csv: bool = True, csv_path: str | Path | None = None) -> ConvergenceReport:
    """Run every (method, n) cell and compare with the spectral propagator.

    A failing cell produces a row with NaN errors and an entry in
    ``report.failures``; the sweep continues.
    """
    dec, psi0 = build_problem(cfg)
    exact = stone_propagator(dec.assembled_generator, cfg.t) @ psi0
    norm0 = float(np.linalg.norm(psi0))
    bss_fams = [
        skew_family(kind, a * fam.generator)
        for kind, a, fam in zip(cfg.families, dec.coefficients, dec.families)
    ]
    rows, failures = [], []
    for method in cfg.methods:
        for n in cfg.n_values:
            start = time.perf_counter()
            try:
                psi = _approximate(method, cfg, dec, psi0, n, bss_fams)
                if not np.all(np.isfinite(psi)):
                    raise FloatingPointError("non-finite result")
                err = float(np.linalg.norm(psi - exact))
                drift = abs(float(np.linalg.norm(psi)) - norm0)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                failures.append((method, n, str(exc)))
                err = drift = math.nan
            rows.append(SweepRow(method, cfg.t, n, err, drift, time.perf_counter() - start))
    rows.sort(key=lambda r: (r.method, r.n))
    report = ConvergenceReport(rows, {}, failures)
    for method in cfg.methods:
        try:
            report.fitted_order[method] = fit_order(report, method)
        except ValueError:
            report.fitted_order[method] = math.nan
    if write_csv:
        path = Path(csv_path) if csv_path is not None else cfg.resolved_csv_path()
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(report.to_csv())
    return report


def fit_order(report: ConvergenceReport | Sequence[SweepRow], method: str) -> float | str:
    """Least-squares slope of ``log(error)`` against ``log(1/n)``.

    Returns ``"exact"`` when every error is below ``1e-13``.
    """
    rows = report.rows if isinstance(report, ConvergenceReport) else list(report)
    pts = [(r.n, r.oracle_error) for r in rows if r.method == method and np.isfinite(r.oracle_error)]
    if pts and max(e for _, e in pts) < 1e-13:
        return "exact"
    pts = [(n, e) for n, e in pts if e >= 1e-13]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 rows with positive error for {method!r}, got {len(pts)}")
    x = np.log(1.0 / np.array([n for n, _ in pts], dtype=float))
    y = np.log(np.array([e for _, e in pts]))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
