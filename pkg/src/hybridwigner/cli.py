"""Config-driven scenario runner with deterministic CSV output.

A scenario file is a small INI-style text config (sections [scenario],
[atom], [field], [quadrature], [output]); ``run`` dispatches to the library
and writes one CSV table per run.  Identical configs produce byte-identical
files: floats are printed with 17 significant digits, metadata carries no
timestamps, and row order is fixed (ascending time, then ascending abscissa).

Exit codes: 0 success, 1 config error, 2 I/O error, 3 numeric failure
(a NaN anywhere aborts the run; NaN is never written), 4 acceptance failure
(verify only).
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from . import __version__
from .quadrature import ConvergenceError, IntegrationSpec
from .su2_wigner import SpinHalfState
from .hybrid_model import (
    DeltaAmplitude,
    FieldState,
    GaussianAmplitude,
    HybridState,
    ObservableSymbol,
    PhaseDistribution,
    atomic_pfunction,
    correlation,
    hybrid_expectation,
    phase_distribution_delta,
    phase_distribution_gaussian,
    quadrature_distribution,
    semiclassical_expectation,
)
from .quantum_reference import evolve_quantum, quantum_correlation, quantum_expectation
from .oscillator_hybrid import CouplingParams, OscillatorPair, pair_flow

__all__ = [
    "ConfigError",
    "NumericError",
    "ScenarioConfig",
    "ResultTable",
    "parse_config",
    "run_scenario",
    "render_csv",
    "emit_csv",
    "main",
]

SCENARIOS = (
    "phase-dist",
    "quad-dist",
    "moments",
    "correlations",
    "pfunction",
    "compare",
    "oscillators",
    "verify",
)

_MOMENT_COLUMNS = (
    ("a", ObservableSymbol.A),
    ("adag", ObservableSymbol.ADAG),
    ("sigma_z", ObservableSymbol.SIGMA_Z),
    ("sigma_minus", ObservableSymbol.SIGMA_MINUS),
    ("sigma_minus_adag", ObservableSymbol.SIGMA_MINUS_ADAG),
    ("sigma_z_a", ObservableSymbol.SIGMA_Z_A),
)
_CORR_COLUMNS = (
    ("corr_sigma_z_a", ObservableSymbol.SIGMA_Z, ObservableSymbol.A),
    ("corr_sigma_minus_adag", ObservableSymbol.SIGMA_MINUS, ObservableSymbol.ADAG),
)


class ConfigError(ValueError):
    """Invalid scenario configuration; carries every diagnostic at once."""

    def __init__(self, errors: Sequence[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


class NumericError(RuntimeError):
    """A scenario produced a non-finite number."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    atom: SpinHalfState
    atom_kind: str
    field: FieldState
    chi: float
    times: tuple[float, ...]
    quadrature: IntegrationSpec
    output: str | None = None
    beta0: complex = 1.0 + 0j
    verify_filter: str | None = None


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    metadata: tuple[str, ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match column count")


# -- config parsing ----------------------------------------------------------


def _parse_sections(text: str, errors: list[str]):
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in ("scenario", "atom", "field", "quadrature", "output"):
                errors.append(f"line {lineno}: unknown section [{current}]")
                current = None
            elif current in sections:
                errors.append(f"line {lineno}: duplicate section [{current}]")
            else:
                sections[current] = {}
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        if current is None:
            errors.append(f"line {lineno}: key outside of any section")
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key.lower() in sections[current]:
            errors.append(f"line {lineno}: duplicate key {key!r} in [{current}]")
        sections[current][key.lower()] = (value, lineno)
    return sections


def _take_float(section, key, errors, section_name, default=None, required=False):
    if key not in section:
        if required:
            errors.append(f"[{section_name}] missing required key {key!r}")
        return default
    value, lineno = section.pop(key)
    try:
        return float(value)
    except ValueError:
        errors.append(f"line {lineno}: {key} must be a number, got {value!r}")
        return default


def _parse_times(section, errors) -> tuple[float, ...]:
    if "times" not in section:
        errors.append("[scenario] missing required key 'times'")
        return ()
    value, lineno = section.pop("times")
    text = value.strip()
    if text.startswith("range(") and text.endswith(")"):
        parts = [p.strip() for p in text[6:-1].split(",")]
        if len(parts) != 3:
            errors.append(f"line {lineno}: range takes (start, stop, steps)")
            return ()
        try:
            start, stop = float(parts[0]), float(parts[1])
            steps = int(parts[2])
        except ValueError:
            errors.append(f"line {lineno}: malformed range {text!r}")
            return ()
        if steps < 1:
            errors.append(f"line {lineno}: range steps must be >= 1")
            return ()
        if steps == 1:
            return (start,)
        if stop <= start:
            errors.append(f"line {lineno}: range stop must exceed start")
            return ()
        step = (stop - start) / (steps - 1)
        return tuple(start + k * step for k in range(steps))
    try:
        times = tuple(float(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        errors.append(f"line {lineno}: times must be numbers, got {value!r}")
        return ()
    if not times:
        errors.append(f"line {lineno}: times list is empty")
        return ()
    if any(b <= a for a, b in zip(times, times[1:])):
        errors.append(f"line {lineno}: times must be strictly increasing")
        return ()
    return times


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a scenario config; reports all errors at once."""
    errors: list[str] = []
    sections = _parse_sections(text, errors)

    scn = sections.get("scenario", {})
    if "scenario" not in sections:
        errors.append("missing [scenario] section")
    name = None
    if "name" in scn:
        value, lineno = scn.pop("name")
        if value not in SCENARIOS:
            errors.append(f"line {lineno}: unknown scenario {value!r}")
        else:
            name = value
    elif "scenario" in sections:
        errors.append("[scenario] missing required key 'name'")
    chi = _take_float(scn, "chi", errors, "scenario", default=1.0)
    if name == "verify":
        scn.pop("times", None)
        times: tuple[float, ...] = ()
    else:
        times = _parse_times(scn, errors)
    beta0 = complex(
        _take_float(scn, "beta0_re", errors, "scenario", default=1.0),
        _take_float(scn, "beta0_im", errors, "scenario", default=0.0),
    )
    verify_filter = None
    if "filter" in scn:
        verify_filter, _ = scn.pop("filter")

    atom_section = sections.get("atom", {})
    atom = SpinHalfState.ground()
    atom_kind = "ground"
    if "kind" in atom_section:
        value, lineno = atom_section.pop("kind")
        atom_kind = value.strip().lower()
        if atom_kind == "ground":
            atom = SpinHalfState.ground()
        elif atom_kind == "phase":
            atom = SpinHalfState.phase_state()
        elif atom_kind == "bloch":
            if "s" not in atom_section:
                errors.append(f"line {lineno}: bloch atom needs key 's = sx, sy, sz'")
            else:
                sval, slineno = atom_section.pop("s")
                try:
                    atom = SpinHalfState(tuple(float(p) for p in sval.split(",")))
                except ValueError as exc:
                    errors.append(f"line {slineno}: invalid bloch vector: {exc}")
        else:
            errors.append(f"line {lineno}: atom kind must be ground, phase or bloch")
    elif "atom" in sections:
        errors.append("[atom] missing required key 'kind'")

    field_section = sections.get("field", {})
    field_state: FieldState = GaussianAmplitude(1.0, 1.0)
    if "kind" in field_section:
        value, lineno = field_section.pop("kind")
        kind = value.strip().lower()
        r0 = _take_float(field_section, "r0", errors, "field", required=True)
        if kind == "delta":
            phi0 = _take_float(field_section, "phi0", errors, "field", default=0.0)
            if r0 is not None:
                try:
                    field_state = DeltaAmplitude(r0, phi0)
                except ValueError as exc:
                    errors.append(f"line {lineno}: {exc}")
        elif kind == "gaussian":
            sigma = _take_float(field_section, "sigma", errors, "field", required=True)
            if r0 is not None and sigma is not None:
                try:
                    field_state = GaussianAmplitude(r0, sigma)
                except ValueError as exc:
                    errors.append(f"line {lineno}: {exc}")
        else:
            errors.append(f"line {lineno}: field kind must be delta or gaussian")
    elif "field" in sections:
        errors.append("[field] missing required key 'kind'")

    quad_section = sections.get("quadrature", {})
    quad_kwargs = {}
    for key in ("relative_tolerance", "absolute_tolerance", "radial_cutoff_sigmas"):
        if key in quad_section:
            v = _take_float(quad_section, key, errors, "quadrature")
            if v is not None:
                quad_kwargs[key] = v
    if "max_subdivisions" in quad_section:
        value, lineno = quad_section.pop("max_subdivisions")
        try:
            quad_kwargs["max_subdivisions"] = int(value)
        except ValueError:
            errors.append(f"line {lineno}: max_subdivisions must be an integer")
    try:
        quadrature = IntegrationSpec(**quad_kwargs)
    except ValueError as exc:
        errors.append(f"[quadrature] {exc}")
        quadrature = IntegrationSpec()

    output = None
    out_section = sections.get("output", {})
    if "path" in out_section:
        output, _ = out_section.pop("path")

    for section_name, section in sections.items():
        for key, (_, lineno) in section.items():
            errors.append(f"line {lineno}: unknown key {key!r} in [{section_name}]")

    if name is not None and name != "verify":
        _validate_combination(name, atom_kind, field_state, times, errors)

    if errors:
        raise ConfigError(errors)
    assert name is not None
    return ScenarioConfig(
        scenario=name,
        atom=atom,
        atom_kind=atom_kind,
        field=field_state,
        chi=chi,
        times=times,
        quadrature=quadrature,
        output=output,
        beta0=beta0,
        verify_filter=verify_filter,
    )


def _validate_combination(name, atom_kind, field_state, times, errors):
    delta = isinstance(field_state, DeltaAmplitude)
    if name in ("phase-dist", "pfunction") and any(t == 0.0 for t in times) and delta:
        errors.append(f"scenario {name}: delta field requires all times > 0")
    if name == "pfunction" and any(t == 0.0 for t in times):
        errors.append("scenario pfunction requires all times > 0")
    if name == "quad-dist" and delta:
        errors.append("scenario quad-dist requires a gaussian field")
    if name == "compare":
        if delta or abs(field_state.sigma - 1.0) > 1e-12:
            errors.append("scenario compare requires a gaussian field with sigma = 1")
        if atom_kind == "bloch":
            errors.append("scenario compare requires a pure ground or phase atom")
    if name == "oscillators" and not delta:
        errors.append("scenario oscillators uses a delta field for the initial amplitude")


# -- scenario execution ------------------------------------------------------


def _complex_triple(z: complex) -> tuple[float, float, float]:
    return (z.real, z.imag, abs(z))


def _phase_grid(dist: PhaseDistribution, points: int) -> list[float]:
    lo, hi = dist.support
    if points == 1:
        return [lo]
    step = (hi - lo) / (points - 1)
    # pin the last point so accumulated rounding cannot push it off-support
    return [lo + k * step for k in range(points - 1)] + [hi]


def _map_times(fn: Callable[[float], list[tuple]], times, threads: int) -> list[tuple]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(fn, times))
    else:
        chunks = [fn(t) for t in times]
    return [row for chunk in chunks for row in chunk]


def _run_phase_dist(config: ScenarioConfig, threads: int) -> ResultTable:
    def rows_at(t: float) -> list[tuple]:
        chi_t = config.chi * t
        if isinstance(config.field, DeltaAmplitude):
            dist = phase_distribution_delta(config.atom, chi_t)
            grid = _phase_grid(dist, 101)
        else:
            dist = phase_distribution_gaussian(
                config.atom, config.field, chi_t, config.quadrature
            )
            grid = _phase_grid(dist, 201)
        return [(t, phi, dist.evaluate(phi)) for phi in grid]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(("t", "phi", "density"), tuple(rows), _metadata(config))


def _run_quad_dist(config: ScenarioConfig, threads: int) -> ResultTable:
    field = config.field
    half = field.r0 + 5.0 * field.sigma

    def rows_at(t: float) -> list[tuple]:
        dist = quadrature_distribution(
            config.atom, field, config.chi * t, config.quadrature
        )
        grid = [(-half + k * (2.0 * half) / 200.0) for k in range(201)]
        return [(t, y, dist.evaluate(y)) for y in grid]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(("t", "y", "p"), tuple(rows), _metadata(config))


def _run_pfunction(config: ScenarioConfig, threads: int) -> ResultTable:
    def rows_at(t: float) -> list[tuple]:
        dist = atomic_pfunction(config.atom, config.chi * t)
        grid = _phase_grid(dist, 101)
        return [(t, d, dist.evaluate(d)) for d in grid]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(("t", "delta", "p"), tuple(rows), _metadata(config))


def _hybrid_moment_values(config: ScenarioConfig, t: float) -> list[float]:
    state = HybridState(config.atom, config.field, config.chi, t)
    values: list[float] = []
    for _, obs in _MOMENT_COLUMNS:
        values.extend(_complex_triple(hybrid_expectation(state, obs, config.quadrature)))
    return values


def _hybrid_corr_values(config: ScenarioConfig, t: float) -> list[float]:
    state = HybridState(config.atom, config.field, config.chi, t)
    values: list[float] = []
    for _, a, b in _CORR_COLUMNS:
        values.extend(_complex_triple(correlation(state, a, b, config.quadrature)))
    return values


def _moment_headers(prefix: str = "") -> list[str]:
    cols = []
    for name, _ in _MOMENT_COLUMNS:
        cols.extend(f"{prefix}{name}_{part}" for part in ("re", "im", "abs"))
    return cols


def _corr_headers(prefix: str = "") -> list[str]:
    cols = []
    for name, _, _ in _CORR_COLUMNS:
        cols.extend(f"{prefix}{name}_{part}" for part in ("re", "im", "abs"))
    return cols


def _run_moments(config: ScenarioConfig, threads: int) -> ResultTable:
    def rows_at(t: float) -> list[tuple]:
        return [tuple([t] + _hybrid_moment_values(config, t))]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(tuple(["t"] + _moment_headers()), tuple(rows), _metadata(config))


def _run_correlations(config: ScenarioConfig, threads: int) -> ResultTable:
    def rows_at(t: float) -> list[tuple]:
        return [tuple([t] + _hybrid_corr_values(config, t))]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(tuple(["t"] + _corr_headers()), tuple(rows), _metadata(config))


def _atom_amplitudes(config: ScenarioConfig) -> tuple[complex, complex]:
    sx, sy, sz = config.atom.s
    theta = math.acos(max(-1.0, min(1.0, sz)))
    phi = math.atan2(sy, sx)
    return complex(math.cos(theta / 2.0)), math.sin(theta / 2.0) * cmath.exp(1j * phi)


def _run_compare(config: ScenarioConfig, threads: int) -> ResultTable:
    c_e, c_g = _atom_amplitudes(config)
    alpha = config.field.mean_amplitude

    def rows_at(t: float) -> list[tuple]:
        values: list[float] = [t]
        values += _hybrid_moment_values(config, t)
        values += _hybrid_corr_values(config, t)
        for mean_field in (False, True):
            for _, obs in _MOMENT_COLUMNS:
                values.extend(
                    _complex_triple(
                        semiclassical_expectation(
                            config.atom, config.field, obs, config.chi, t, mean_field
                        )
                    )
                )
        qstate = evolve_quantum(c_e, c_g, alpha, config.chi, t)
        for _, obs in _MOMENT_COLUMNS:
            values.extend(_complex_triple(quantum_expectation(qstate, obs)))
        for _, a, b in _CORR_COLUMNS:
            values.extend(_complex_triple(quantum_correlation(qstate, a, b)))
        return [tuple(values)]

    columns = (
        ["t"]
        + _moment_headers()
        + _corr_headers()
        + _moment_headers("sc_")
        + _moment_headers("mf_")
        + _moment_headers("q_")
        + _corr_headers("q_")
    )
    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(tuple(columns), tuple(rows), _metadata(config))


def _run_oscillators(config: ScenarioConfig, threads: int) -> ResultTable:
    params = CouplingParams(config.chi)
    gamma0 = OscillatorPair(config.field.mean_amplitude, config.beta0)

    def rows_at(t: float) -> list[tuple]:
        g = pair_flow(gamma0, params, t)
        energy = abs(g.alpha) ** 2 + abs(g.beta) ** 2
        return [(t, g.alpha.real, g.alpha.imag, g.beta.real, g.beta.imag, energy)]

    rows = _map_times(rows_at, config.times, threads)
    return ResultTable(
        ("t", "alpha_re", "alpha_im", "beta_re", "beta_im", "energy"),
        tuple(rows),
        _metadata(config),
    )


def _run_verify(config: ScenarioConfig) -> ResultTable:
    from .acceptance import run_all

    results = run_all(config.verify_filter)
    rows = []
    for res in results:
        for check in res.checks:
            rows.append(
                (
                    res.number,
                    res.name,
                    check.label,
                    check.measured,
                    check.bound,
                    "pass" if check.passed else "FAIL",
                )
            )
    return ResultTable(
        ("criterion", "name", "check", "measured", "bound", "status"),
        tuple(rows),
        _metadata(config),
    )


def _metadata(config: ScenarioConfig) -> tuple[str, ...]:
    lines = [
        f"hybridwigner {__version__}",
        f"scenario = {config.scenario}",
        f"atom = {config.atom_kind} s={config.atom.s}",
        f"field = {config.field!r}",
        f"chi = {config.chi!r}",
        f"times = {len(config.times)} points"
        + (f" in [{config.times[0]!r}, {config.times[-1]!r}]" if config.times else ""),
        f"quadrature = rel {config.quadrature.relative_tolerance!r}"
        f" abs {config.quadrature.absolute_tolerance!r}"
        f" maxsub {config.quadrature.max_subdivisions}"
        f" cutoff {config.quadrature.radial_cutoff_sigmas!r}",
    ]
    return tuple(lines)


def run_scenario(config: ScenarioConfig, threads: int = 1) -> ResultTable:
    """Compute the table for a validated config.

    Raises NumericError if any produced value is NaN; a quadrature convergence
    failure is reported the same way.
    """
    runners = {
        "phase-dist": _run_phase_dist,
        "quad-dist": _run_quad_dist,
        "pfunction": _run_pfunction,
        "moments": _run_moments,
        "correlations": _run_correlations,
        "compare": _run_compare,
        "oscillators": _run_oscillators,
    }
    if config.scenario == "verify":
        return _run_verify(config)
    try:
        table = runners[config.scenario](config, threads)
    except ConvergenceError as exc:
        raise NumericError(f"scenario {config.scenario}: {exc}") from exc
    for row in table.rows:
        for item in row:
            if isinstance(item, float) and math.isnan(item):
                raise NumericError(f"scenario {config.scenario} produced NaN")
    return table


# -- CSV emission ------------------------------------------------------------


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            raise NumericError("refusing to write NaN")
        return f"{value:.17g}"
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def render_csv(table: ResultTable) -> str:
    lines = [f"# {line}" for line in table.metadata]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def emit_csv(table: ResultTable, path: str) -> None:
    """Write the table; output is byte-identical for identical configs."""
    text = render_csv(table)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# -- entry point -------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hybridwigner",
        description="Phase-space hybrid atom-field scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario config and write CSV")
    run_p.add_argument("config", help="path to the scenario config file")
    run_p.add_argument("--output", help="output CSV path (overrides [output])")
    run_p.add_argument("--threads", type=int, default=1)
    ver_p = sub.add_parser("verify", help="run the acceptance checks")
    ver_p.add_argument("--filter", default=None, help="substring filter on names")

    args = parser.parse_args(argv)

    if args.command == "verify":
        from .acceptance import run_all

        results = run_all(args.filter)
        failed = False
        for res in results:
            status = "PASS" if res.passed else "FAIL"
            print(f"[{status}] criterion {res.number}: {res.name}")
            for check in res.checks:
                mark = "ok " if check.passed else "BAD"
                print(f"    {mark} {check.label}: {check.measured:.6g} (bound {check.bound})")
            failed = failed or not res.passed
        return 4 if failed else 0

    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 1

    try:
        table = run_scenario(config, threads=max(1, args.threads))
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3

    out_path = args.output or config.output
    try:
        if out_path is None:
            print(render_csv(table), end="")
        else:
            emit_csv(table, out_path)
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    if config.scenario == "verify" and any(r[-1] == "FAIL" for r in table.rows):
        return 4
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
