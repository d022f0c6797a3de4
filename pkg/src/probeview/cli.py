"""Command-line front end: reductions, sweeps, oracle checks, profile overlap.

Output is deterministic: floats are always rendered with %.17g (exact
round-trip), mappings keep insertion order, and identical flags yield
byte-identical bytes.  Exit codes: 0 success, 2 validation error,
3 oracle disagreement, 4 file I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .analysis import ConsistencyError, purity, purity_sweep, thermal_sweep
from .fock import (
    Coherent,
    Custom,
    DensityMatrix,
    FockVector,
    Mixture,
    ModeSplit,
    Number,
    StateFamily,
    Thermal,
    TruncationError,
    TruncationPolicy,
    ValidationError,
    VacuumLimitError,
    materialize,
    number_expectation,
    overlap_from_profile,
)
from .oracle import compare_states, expand_two_mode, partial_trace_numeric, random_fock_vectors
from .reduction import (
    reduce_coherent,
    reduce_mixed,
    reduce_number_state,
    reduce_pure_general,
    reduce_thermal,
)

__all__ = ["RunConfig", "main"]

_COMMANDS = ("reduce", "sweep-purity", "sweep-thermal", "oracle-check", "profile-overlap")
_RANDOM_STATE_COUNT = 100


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by every subcommand."""

    command: str
    state: Optional[StateFamily]
    q0sq: tuple[float, ...]
    cutoff: int
    tol: float
    output_format: str
    output_path: str

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if any(not 0.0 <= q <= 1.0 for q in self.q0sq):
            raise ValidationError("q0sq values must lie in [0, 1]")
        if not isinstance(self.cutoff, int) or self.cutoff < 1:
            raise ValidationError(f"cutoff must be an integer >= 1, got {self.cutoff!r}")
        if not 0.0 < self.tol <= 1e-2:
            raise ValidationError(f"tol must lie in (0, 1e-2], got {self.tol!r}")
        if self.output_format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.output_format!r}")


def _fmt_float(value: float) -> str:
    """Fixed 17-significant-digit rendering; collapses signed zero."""
    value = float(value)
    if value == 0.0:
        return "0"
    return "%.17g" % value


def _fmt_number(value: Union[int, float]) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return _fmt_float(value)


def _json_scalar(value) -> Optional[str]:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    return None


def _render_json(value, indent: int = 0) -> str:
    """Deterministic pretty JSON with %.17g floats; no external state."""
    scalar = _json_scalar(value)
    if scalar is not None:
        return scalar
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [f"{json.dumps(str(k))}: {_render_json(v, indent + 2)}" for k, v in value.items()]
        if all(_json_scalar(v) is not None for v in value.values()) and len(parts) <= 4:
            return "{" + ", ".join(parts) + "}"
        return "{\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if len(value) == 0:
            return "[]"
        parts = [_render_json(v, indent + 2) for v in value]
        if all(_json_scalar(v) is not None for v in value):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    raise ValidationError(f"cannot serialize {type(value).__name__}")


def _complex_pair(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _csv_row(values) -> str:
    return ",".join(_fmt_number(v) if not isinstance(v, str) else v for v in values)


def _parse_grid(text: str, flag: str) -> tuple[float, ...]:
    """A single float or an inclusive range 'start:stop:step'."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return (float(parts[0]),)
        if len(parts) != 3:
            raise ValueError
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValidationError(f"{flag} expects a number or start:stop:step, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise ValidationError(f"{flag} values must be finite")
    if step <= 0.0 or stop < start:
        raise ValidationError(f"{flag} needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-6))
    values = [start + k * step for k in range(count + 1)]
    if abs(values[-1] - stop) <= 1e-9 * max(1.0, abs(stop)):
        values[-1] = stop
    return tuple(values)


def _parse_alpha(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValidationError(f"--alpha expects 're' or 're,im', got {text!r}")


def _number_from(obj: dict, key: str, descriptor: str) -> float:
    value = obj.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{descriptor} descriptor needs numeric {key!r}")
    return float(value)


def _alpha_from(obj: dict) -> complex:
    raw = obj.get("alpha")
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(float(raw), 0.0)
    if isinstance(raw, dict):
        re = raw.get("re", 0.0)
        im = raw.get("im", 0.0)
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(float(re), float(im))
    raise ValidationError('coherent descriptor needs "alpha" as {"re": x, "im": y} or a number')


def _coeffs_from(obj: dict) -> FockVector:
    raw = obj.get("coeffs")
    if not isinstance(raw, list) or not raw:
        raise ValidationError('custom descriptor needs a nonempty "coeffs" list of [re, im] pairs')
    amplitudes = []
    for entry in raw:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in entry)
        ):
            raise ValidationError("each custom coefficient must be a [re, im] pair")
        amplitudes.append(complex(float(entry[0]), float(entry[1])))
    return FockVector(np.array(amplitudes))


def _family_from_descriptor(obj, cutoff: int, pure_only: bool = False) -> StateFamily:
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValidationError('state descriptor must be an object with a "family" key')
    family = obj["family"]
    if family == "number":
        n = obj.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ValidationError('number descriptor needs a nonnegative integer "n"')
        return Number(n)
    if family == "coherent":
        return Coherent(_alpha_from(obj))
    if family == "custom":
        return Custom(_coeffs_from(obj))
    if pure_only:
        raise ValidationError(f"mixture components must be pure states, got {family!r}")
    if family == "thermal":
        beta_energy = _number_from(obj, "betaE", "thermal")
        energy = float(obj.get("energy", 1.0))
        if beta_energy <= 0.0 or energy <= 0.0:
            raise ValidationError("thermal descriptor needs betaE > 0 and energy > 0")
        return Thermal(beta_energy / energy, energy)
    if family == "mixture":
        weights = obj.get("weights")
        states = obj.get("states")
        if not isinstance(weights, list) or not isinstance(states, list):
            raise ValidationError('mixture descriptor needs "weights" and "states" lists')
        if any(isinstance(w, bool) or not isinstance(w, (int, float)) for w in weights):
            raise ValidationError("mixture weights must be numbers")
        members = []
        policy = TruncationPolicy(cutoff)
        for entry in states:
            component = _family_from_descriptor(entry, cutoff, pure_only=True)
            members.append(materialize(component, policy).state)
        return Mixture(tuple(float(w) for w in weights), tuple(members))
    raise ValidationError(f"unknown state family {family!r}")


def _parse_state(text: str, cutoff: int) -> StateFamily:
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed state descriptor: {exc}") from None
    return _family_from_descriptor(obj, cutoff)


def _vacuum_matrix() -> DensityMatrix:
    return DensityMatrix(np.array([[1.0 + 0.0j]]))


def _reduce_one(family: StateFamily, q0sq: float, cutoff: int, tol: float) -> DensityMatrix:
    """Route one reduction through the tightest applicable formula."""
    split = ModeSplit.from_q0sq(q0sq)
    policy = TruncationPolicy(cutoff, tail_tol=tol)
    if isinstance(family, Number):
        return reduce_number_state(family.n, split)
    if isinstance(family, Coherent):
        reduced = reduce_coherent(family.alpha, split)
        coeffs = materialize(reduced, policy).state.coeffs
        return DensityMatrix(np.outer(coeffs, coeffs.conj()))
    if isinstance(family, Thermal):
        if split.q0 == 0.0:
            return _vacuum_matrix()
        reduced_thermal = reduce_thermal(family.beta, family.energy, split)
        return materialize(reduced_thermal, policy).state
    if isinstance(family, Custom):
        psi = family.state
        if psi.dim > cutoff + 1:
            psi = materialize(family, policy).state
        return reduce_pure_general(psi, split, tol).rho0
    if isinstance(family, Mixture):
        return reduce_mixed(family, split, tol).rho0
    raise ValidationError(f"unknown state family: {family!r}")


def _cmd_reduce(config: RunConfig):
    results = []
    for q0sq in config.q0sq:
        rho = _reduce_one(config.state, q0sq, config.cutoff, config.tol)
        results.append(
            {
                "q0sq": q0sq,
                "dim": rho.dim,
                "rho0": [[_complex_pair(z) for z in row] for row in rho.elems.tolist()],
                "purity": purity(rho),
                "mean_occupation": number_expectation(rho),
            }
        )
    payload = {"command": "reduce", "cutoff": config.cutoff}
    if len(results) == 1:
        payload.update(results[0])
    else:
        payload["results"] = results
    lines = [f"# command = reduce", f"# cutoff = {config.cutoff}", "q0sq,i,j,re,im"]
    for entry in results:
        dim = entry["dim"]
        for i in range(dim):
            for j in range(dim):
                pair = entry["rho0"][i][j]
                lines.append(_csv_row((entry["q0sq"], i, j, pair["re"], pair["im"])))
    for entry in results:
        lines.append(
            "# q0sq = {} dim = {} purity = {} mean_occupation = {}".format(
                _fmt_float(entry["q0sq"]),
                entry["dim"],
                _fmt_float(entry["purity"]),
                _fmt_float(entry["mean_occupation"]),
            )
        )
    return payload, lines, 0


def _sweep_payload(command: str, sweep):
    payload = {
        "command": command,
        "schema": list(sweep.schema),
        "rows": [list(row) for row in sweep.rows],
    }
    lines = [f"# command = {command}", ",".join(sweep.schema)]
    lines.extend(_csv_row(row) for row in sweep.rows)
    return payload, lines


def _cmd_sweep_purity(config: RunConfig, max_n: int):
    if max_n < 1:
        raise ValidationError(f"--max-n must be >= 1, got {max_n}")
    sweep = purity_sweep(range(1, max_n + 1), config.q0sq)
    payload, lines = _sweep_payload("sweep-purity", sweep)
    return payload, lines, 0


def _cmd_sweep_thermal(config: RunConfig, inv_betae: tuple[float, ...]):
    if any(v <= 0.0 for v in inv_betae):
        raise ValidationError("--inv-betae values must be positive")
    betae_grid = [1.0 / v for v in inv_betae]
    sweep = thermal_sweep(config.q0sq, betae_grid)
    payload, lines = _sweep_payload("sweep-thermal", sweep)
    return payload, lines, 0


def _number_vector(n: int) -> FockVector:
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    return FockVector(coeffs)


def _cmd_oracle_check(config: RunConfig, max_n: int, seed: int):
    if max_n < 1:
        raise ValidationError(f"--max-n must be >= 1, got {max_n}")
    if seed < 0:
        raise ValidationError(f"--seed must be nonnegative, got {seed}")
    worst_number = 0.0
    cases_number = 0
    for n in range(max_n + 1):
        for q0sq in config.q0sq:
            split = ModeSplit.from_q0sq(q0sq)
            closed = reduce_number_state(n, split)
            expanded = expand_two_mode(_number_vector(n), split, max(n, 1))
            numeric = partial_trace_numeric(expanded)
            worst_number = max(worst_number, compare_states(closed, numeric).max_abs_diff)
            cases_number += 1
    worst_random = 0.0
    cases_random = 0
    for psi in random_fock_vectors(_RANDOM_STATE_COUNT, max_n, seed):
        for q0sq in config.q0sq:
            split = ModeSplit.from_q0sq(q0sq)
            series = reduce_pure_general(psi, split, config.tol).rho0
            numeric = partial_trace_numeric(expand_two_mode(psi, split, max(psi.dim - 1, 1)))
            worst_random = max(worst_random, compare_states(series, numeric).max_abs_diff)
            cases_random += 1
    disagrees = worst_number > config.tol or worst_random > config.tol
    status = "disagreement" if disagrees else "ok"
    payload = {
        "command": "oracle-check",
        "max_n": max_n,
        "seed": seed,
        "tolerance": config.tol,
        "checks": [
            {
                "name": "number_state_closed_form",
                "cases": cases_number,
                "max_abs_diff": worst_number,
            },
            {"name": "random_state_series", "cases": cases_random, "max_abs_diff": worst_random},
        ],
        "status": status,
    }
    lines = [
        "# command = oracle-check",
        f"# max_n = {max_n}",
        f"# seed = {seed}",
        f"# tolerance = {_fmt_float(config.tol)}",
        f"# status = {status}",
        "check,cases,max_abs_diff",
        _csv_row(("number_state_closed_form", cases_number, worst_number)),
        _csv_row(("random_state_series", cases_random, worst_random)),
    ]
    return payload, lines, 3 if disagrees else 0


def _cmd_profile_overlap(config: RunConfig, profile: str, region_text: Optional[str]):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # empty files warn before the shape check rejects them
            table = np.loadtxt(profile, comments="#", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"malformed profile file {profile!r}: {exc}") from None
    if table.ndim != 2 or table.shape[1] != 2 or table.shape[0] < 2:
        raise ValidationError("profile file needs two columns: position value")
    samples = [(float(x), complex(v)) for x, v in table]
    if region_text is None:
        region = (float(table[0, 0]), float(table[-1, 0]))
    else:
        parts = region_text.split(":")
        if len(parts) != 2:
            raise ValidationError(f"--region expects 'a:b', got {region_text!r}")
        try:
            region = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise ValidationError(f"--region expects numbers, got {region_text!r}") from None
    q0sq = overlap_from_profile(samples, region)
    payload = {
        "command": "profile-overlap",
        "profile": profile,
        "region": [region[0], region[1]],
        "q0sq": q0sq,
    }
    lines = [
        "# command = profile-overlap",
        f"# profile = {profile}",
        f"# region = {_fmt_float(region[0])} {_fmt_float(region[1])}",
        "q0sq",
        _fmt_float(q0sq),
    ]
    return payload, lines, 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probeview",
        description="Reduced density matrices of bosonic states restricted to a region.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", default="-", help="output path, or - for standard output")

    p_reduce = sub.add_parser("reduce", help="reduce a state to the region")
    group = p_reduce.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="JSON state descriptor, or @file")
    group.add_argument("--alpha", help="coherent amplitude shorthand: re or re,im")
    p_reduce.add_argument("--q0sq", required=True, help="region overlap: x or start:stop:step")
    p_reduce.add_argument("--cutoff", type=int, default=64)
    p_reduce.add_argument("--tol", type=float, default=1e-10)
    add_common(p_reduce)

    p_purity = sub.add_parser("sweep-purity", help="purity of reduced number states")
    p_purity.add_argument("--max-n", type=int, default=5)
    p_purity.add_argument("--q0sq", default="0:1:0.05", help="grid: x or start:stop:step")
    add_common(p_purity)

    p_thermal = sub.add_parser("sweep-thermal", help="temperature map of reduced thermal states")
    p_thermal.add_argument("--q0sq", default="0.25:1:0.25", help="grid: x or start:stop:step")
    p_thermal.add_argument(
        "--inv-betae", default="0.1:10:0.1", help="normalized temperature grid 1/(beta E)"
    )
    add_common(p_thermal)

    p_oracle = sub.add_parser("oracle-check", help="closed forms vs brute-force two-mode oracle")
    p_oracle.add_argument("--max-n", type=int, default=6)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--q0sq", default="0:1:0.1", help="grid: x or start:stop:step")
    p_oracle.add_argument("--tol", type=float, default=1e-10)
    add_common(p_oracle)

    p_profile = sub.add_parser("profile-overlap", help="q0^2 of a sampled 1-D profile")
    p_profile.add_argument("--profile", required=True, help="two-column position/value file")
    p_profile.add_argument("--region", default=None, help="integration interval a:b")
    add_common(p_profile)
    return parser


def _make_config(args: argparse.Namespace) -> RunConfig:
    q0sq_text = getattr(args, "q0sq", None)
    q0sq = _parse_grid(q0sq_text, "--q0sq") if q0sq_text is not None else (1.0,)
    state = None
    if args.command == "reduce":
        cutoff = args.cutoff
        if getattr(args, "alpha", None) is not None:
            state = Coherent(_parse_alpha(args.alpha))
        else:
            state = _parse_state(args.state, cutoff)
    else:
        cutoff = 64
    tol = getattr(args, "tol", 1e-10)
    return RunConfig(
        command=args.command,
        state=state,
        q0sq=q0sq,
        cutoff=cutoff,
        tol=float(tol),
        output_format=args.format,
        output_path=args.out,
    )


def _dispatch(config: RunConfig, args: argparse.Namespace):
    if config.command == "reduce":
        return _cmd_reduce(config)
    if config.command == "sweep-purity":
        return _cmd_sweep_purity(config, args.max_n)
    if config.command == "sweep-thermal":
        return _cmd_sweep_thermal(config, _parse_grid(args.inv_betae, "--inv-betae"))
    if config.command == "oracle-check":
        return _cmd_oracle_check(config, args.max_n, args.seed)
    return _cmd_profile_overlap(config, args.profile, args.region)


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _make_config(args)
        payload, csv_lines, code = _dispatch(config, args)
        if config.output_format == "json":
            text = _render_json(payload) + "\n"
        else:
            text = "\n".join(csv_lines) + "\n"
        _write_output(text, config.output_path)
    except (ValidationError, TruncationError, VacuumLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return code
