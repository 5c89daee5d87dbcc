"""Command-line front end.

    genuslab ahat FILE            integral of the A-hat class
    genuslab localize FILE        localization sum over [[fixed_component]] blocks
    genuslab witten FILE          Phi, phi_W, Ramond index and the checks
    genuslab ramond FILE          Phi / eta^dim
    genuslab modular-check FILE   phi_W in the ring of E4, E6
    genuslab fock-check [FILE]    operator identities on a truncated Fock space

Exit codes: 0 success, 1 a requested check failed, 2 bad input.  Nothing is
written to stdout unless the whole job succeeds.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .errors import GenusLabError, InputError, MissingPairing, ParseError
from .localize import FixedComponent, NormalSummand, vanishing_check
from .roots import ManifoldData, _pmonomials, ahat_class, format_pmonomial, integrate, parse_pmonomial
from .series import PuiseuxQSeries, eta_power
from .witten import integrality_check, modular_weight_check, phi_capital, phi_witten, ramond_index, zagier_check

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

__all__ = ["JobSpec", "parse_input", "parse_manifold", "parse_components", "run", "emit", "load_report", "main"]

COMMANDS = ("ahat", "localize", "witten", "ramond", "fock-check", "modular-check")
CHECKS = ("zagier", "integral", "modular")


class JobSpec(argparse.Namespace):
    """Parsed command line: command, input_path, q_order, level_cutoff, format, ..."""


# -- input ------------------------------------------------------------------
def _load_toml(path) -> tuple:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    text = raw.decode("utf-8", errors="replace")
    try:
        return tomllib.loads(text), text
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        if m:
            line = int(m.group(1))
        else:  # "at end of document"
            line = max(1, len(text.splitlines()))
        raise ParseError(str(exc).split(" (at")[0], line) from exc


def _header_line(text: str, header: str, n: int = 0):
    """1-based line of the n-th occurrence of a table header, if present."""
    seen = 0
    for i, line in enumerate(text.splitlines(), 1):
        if line.strip().startswith(header):
            if seen == n:
                return i
            seen += 1
    return None


def _located(exc: GenusLabError, line):
    if line is not None and not isinstance(exc, ParseError):
        exc.args = (f"line {line}: {exc.args[0] if exc.args else exc}",)
    return exc


def _exact(value, what: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{what} must be an integer or a string like '7/2', got {value!r}")
    return str(value)


def _manifold_from_table(table: dict, pairings: dict | None = None) -> ManifoldData:
    if not isinstance(table, dict):
        raise InputError("a manifold must be a table")
    known = {"dim", "roots", "spin", "p1_zero", "name", "pairings"}
    extra = set(table) - known
    if extra:
        raise InputError(f"unknown manifold keys: {', '.join(sorted(extra))}")
    dim = table.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError("manifold needs an integer 'dim'")
    pairs = dict(table.get("pairings", {}))
    pairs.update(pairings or {})
    values = {parse_pmonomial(k): _exact(v, f"pairing {k}") for k, v in pairs.items()}
    p1_zero = bool(table.get("p1_zero", False))
    if dim % 4 == 0 and dim > 0:
        for mono in _pmonomials(dim // 4):
            if mono not in values:
                if p1_zero and mono[0] > 0:
                    values[mono] = "0"
                else:
                    raise MissingPairing(format_pmonomial(mono))
    roots = table.get("roots", ())
    if isinstance(roots, str):
        roots = [r.strip() for r in roots.split(",") if r.strip()]
    return ManifoldData(
        dim,
        {format_pmonomial(k): v for k, v in values.items()},
        tuple(roots),
        bool(table.get("spin", False)),
        p1_zero,
        str(table.get("name", "")),
    )


def parse_manifold(data: dict, text: str = "") -> ManifoldData:
    if "manifold" not in data:
        raise ParseError("missing [manifold] table", 1)
    try:
        return _manifold_from_table(data["manifold"], data.get("pairings"))
    except GenusLabError as exc:
        raise _located(exc, _header_line(text, "[manifold]")) from None


def _summand(entry) -> NormalSummand:
    if not isinstance(entry, dict):
        raise InputError("normal summands are tables with weight, dim and optional roots")
    weight, dim = entry.get("weight"), entry.get("dim")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (weight, dim)):
        raise InputError("normal summands need integer 'weight' and 'dim'")
    return NormalSummand(weight, dim, tuple(str(r) for r in entry.get("roots", ())))


def parse_components(data: dict, text: str = "") -> list:
    blocks = data.get("fixed_component")
    if not blocks:
        raise ParseError("no [[fixed_component]] blocks", 1)
    out = []
    for n, block in enumerate(blocks):
        try:
            base = block.get("base", {"dim": 0})
            sign = block.get("sign", 1)
            if sign not in (1, -1) or isinstance(sign, bool):
                raise InputError(f"sign must be 1 or -1, got {sign!r}")
            out.append(
                FixedComponent(
                    _manifold_from_table(base),
                    tuple(_summand(e) for e in block.get("normal", ())),
                    sign,
                )
            )
        except GenusLabError as exc:
            raise _located(exc, _header_line(text, "[[fixed_component]]", n)) from None
    return out


def parse_input(path):
    """ManifoldData for files with [manifold], else the list of FixedComponents."""
    data, text = _load_toml(path)
    if "fixed_component" in data:
        return parse_components(data, text)
    return parse_manifold(data, text)


# -- output -----------------------------------------------------------------
def _series_table(s: PuiseuxQSeries, indent: str = "  ") -> list:
    rows = [(f"q^{e}" if e.denominator == 1 else f"q^({e})", str(c)) for e, c in s.terms()]
    rows.append((f"O(q^{s.bound})" if s.bound.denominator == 1 else f"O(q^({s.bound}))", ""))
    wp = max(len(p) for p, _ in rows)
    wc = max(len(c) for _, c in rows)
    return [f"{indent}{p.ljust(wp)}  {c.rjust(wc)}".rstrip() for p, c in rows]


def _text(value, key: str = "", depth: int = 0) -> list:
    pad = "  " * depth
    label = f"{pad}{key}: " if key else pad
    if isinstance(value, PuiseuxQSeries):
        if value.is_zero():
            return [f"{label}0"]
        return [f"{label}{value.to_text()}".rstrip()] + _series_table(value, pad + "  ")
    if isinstance(value, dict):
        out = [f"{pad}{key}:"] if key else []
        for k in sorted(value):
            out += _text(value[k], str(k), depth + 1 if key else depth)
        return out
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list, PuiseuxQSeries)) for v in value):
            return [f"{label}[{', '.join(str(v) for v in value)}]"]
        out = [f"{pad}{key}:"]
        for item in value:
            out += _text(item, "-", depth + 1)
        return out
    if isinstance(value, bool):
        value = "yes" if value else "no"
    elif value is None:
        value = "-"
    return [f"{label}{value}".rstrip()]


def _jsonable(value):
    if isinstance(value, PuiseuxQSeries):
        return value.to_json()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def emit(report, fmt: str = "text") -> str:
    """Render a report (a series or a dict of values) deterministically."""
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if isinstance(report, PuiseuxQSeries):
        return (report.to_text() if report.is_zero() else "\n".join(_text(report))) + "\n"
    return "\n".join(_text(report)) + "\n"


def _revive(value):
    if isinstance(value, dict):
        if set(value) == {"offset", "coeffs", "order"}:
            return PuiseuxQSeries.from_json(value)
        return {k: _revive(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_revive(v) for v in value]
    return value


def load_report(text: str):
    """Inverse of ``emit(report, "json")``: series come back as PuiseuxQSeries."""
    return _revive(json.loads(text))


# -- commands -----------------------------------------------------------------
def _need_manifold(obj) -> ManifoldData:
    if not isinstance(obj, ManifoldData):
        raise InputError("this command needs a [manifold] table, not fixed components")
    return obj


def _cmd_ahat(job) -> tuple:
    M = _need_manifold(parse_input(job.input_path))
    value = integrate(M, ahat_class(M, 1)).coefficient(0)
    return {"name": M.name, "dim": M.dim, "ahat": value}, 0


def _cmd_localize(job) -> tuple:
    comps = parse_input(job.input_path)
    if isinstance(comps, ManifoldData):
        raise InputError("localize needs [[fixed_component]] blocks")
    rep = vanishing_check(comps, job.q_order)
    report = {"index": rep.index, "vanishes": rep.vanishes, "components": len(comps)}
    if rep.first_nonzero is not None:
        report["first_nonzero"] = {"exponent": rep.first_nonzero[0], "coefficient": rep.first_nonzero[1]}
    return report, 1 if job.expect_vanish and not rep.vanishes else 0


def _fit_json(fit) -> dict:
    return fit.to_json()


def _cmd_witten(job) -> tuple:
    M = _need_manifold(parse_input(job.input_path))
    n = job.q_order
    phi = phi_capital(M, n)
    report = {"name": M.name, "dim": M.dim, "phi": phi, "ramond": ramond_index(M, n)}
    usable = (M.p1_zero or M.dim == 0) and M.dim % 4 == 0
    report["phi_w"] = phi_witten(M, n) if usable else None
    report["zagier"] = zagier_check(M, n).equal if usable else None
    integ = integrality_check(M, n)
    report["integral"] = integ.integral
    if integ.offending is not None:
        report["non_integral_at"] = {"exponent": integ.offending[0], "coefficient": integ.offending[1]}
    report["modular_fit"] = _fit_json(modular_weight_check(M, n)) if usable else None
    code = 0
    for check in job.check or ():
        if check in ("zagier", "modular") and not usable:
            raise InputError(f"--check {check} needs p1_zero = true and dim divisible by 4")
        ok = {
            "zagier": report["zagier"],
            "integral": report["integral"],
            "modular": usable and report["modular_fit"]["member"],
        }[check]
        if not ok:
            code = 1
    return report, code


def _cmd_ramond(job) -> tuple:
    M = _need_manifold(parse_input(job.input_path))
    r = ramond_index(M, job.q_order)
    ok = (r * eta_power(M.dim, job.q_order)).agrees_with(phi_capital(M, job.q_order))
    return {"name": M.name, "dim": M.dim, "ramond": r, "eta_identity": ok}, 0 if ok else 1


def _cmd_modular(job) -> tuple:
    M = _need_manifold(parse_input(job.input_path))
    fit = modular_weight_check(M, job.q_order)
    return {"name": M.name, "dim": M.dim, "fit": _fit_json(fit)}, 0 if fit.member else 1


def _parse_modes(text: str) -> tuple:
    modes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)(?::(\d+))?", part)
        if not m:
            raise InputError(f"cannot parse mode {part!r}; use WEIGHT:MULTIPLICITY")
        modes.append((int(m.group(1)), int(m.group(2) or 1)))
    return tuple(modes)


def _fock_specs(job) -> list:
    from .fock import ModeSpec
    from .fock.checks import sweep_modes

    rank = job.clifford_rank
    modes = _parse_modes(job.modes) if job.modes else None
    if job.input_path:
        data, _ = _load_toml(job.input_path)
        table = data.get("fock", {})
        if modes is None and "modes" in table:
            modes = tuple((int(r), int(d)) for r, d in table["modes"])
        rank = int(table.get("clifford_rank", rank))
    if job.family == "sweep":
        return [ModeSpec(m, r, job.level_cutoff) for r in (0, 1) for m in sweep_modes()]
    if job.family == "ramond":
        return [ModeSpec.ramond(rank, job.level_cutoff)]
    return [ModeSpec(modes if modes is not None else ((1, 1),), rank, job.level_cutoff)]


def _fock_verdicts(spec) -> dict:
    from .fock import assemble_global, build_space, graded_character
    from .fock.checks import run_all
    from .localize import component_index

    space = build_space(spec)
    verdicts = run_all(space)
    if spec.clifford_rank == 0 and spec.modes and spec.c1 % 2 == 0:
        # the kernel character of a point fiber is its localization contribution
        comp = FixedComponent(ManifoldData.point(), tuple(NormalSummand(r, d) for r, d in spec.modes), 1)
        expected = component_index(comp, spec.level_cutoff + 1)
        got = graded_character(space, assemble_global(space, "L_K"), "kernel_of_Q")
        same = got.truncate_at(expected.bound).agrees_with(expected) if not got.is_zero() else expected.is_zero()
        verdicts["index_oracle"] = [] if same else [f"character {got.to_text()} != index {expected.to_text()}"]
    if spec.is_ramond and spec.modes:
        l = spec.clifford_rank
        n = spec.level_cutoff
        expected = eta_power(-2 * l, n + 1).scale(2**l)
        got = graded_character(space, assemble_global(space, "P"), "kernel_of_Q", supertrace=False)
        same = got.truncate_at(expected.bound).agrees_with(expected)
        verdicts["ramond_character"] = [] if same else [f"character {got.to_text()} != {expected.to_text()}"]
    return verdicts


def _spec_label(spec) -> str:
    modes = ",".join(f"{r}:{d}" for r, d in spec.modes) or "none"
    return f"modes={modes} l={spec.clifford_rank} cutoff={spec.level_cutoff}"


def _cmd_fock(job) -> tuple:
    from ._parallel import parallel_map

    specs = _fock_specs(job)
    results = parallel_map(_fock_verdicts, specs)
    report = {}
    failed = False
    for spec, verdicts in zip(specs, results):
        entry = {}
        for name, failures in verdicts.items():
            entry[name] = {"pass": not failures, "failures": failures[:5]}
            failed = failed or bool(failures)
        report[_spec_label(spec)] = entry
    return report, 1 if failed else 0


HANDLERS = {
    "ahat": _cmd_ahat,
    "localize": _cmd_localize,
    "witten": _cmd_witten,
    "ramond": _cmd_ramond,
    "modular-check": _cmd_modular,
    "fock-check": _cmd_fock,
}


def run(job) -> tuple:
    """(report, exit code) for a parsed job; input errors raise GenusLabError."""
    if job.q_order < 1:
        raise InputError("--order must be at least 1")
    if job.level_cutoff < 0:
        raise InputError("--cutoff must be nonnegative")
    if job.command != "fock-check" and not job.input_path:
        raise InputError(f"{job.command} needs an input file")
    return HANDLERS[job.command](job)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genuslab", description="Exact q-series genera, localization and Fock checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input_path", nargs="?", help="TOML input file")
    p.add_argument("--order", dest="q_order", type=int, default=8, help="number of q-coefficients (default 8)")
    p.add_argument("--cutoff", dest="level_cutoff", type=int, default=4, help="Fock level cutoff (default 4)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--expect-vanish", action="store_true", help="localize: exit 1 unless the index vanishes")
    p.add_argument("--check", action="append", choices=CHECKS, help="witten: exit 1 if this check fails")
    p.add_argument("--modes", help="fock-check: comma list WEIGHT:MULT, e.g. 1:1,2:1")
    p.add_argument("--clifford-rank", type=int, default=0, help="fock-check: rank of the Clifford module")
    p.add_argument(
        "--family", choices=("single", "sweep", "ramond"), default="single", help="fock-check fixture family"
    )
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        job = parser.parse_args(argv, namespace=JobSpec())
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report, code = run(job)
        out = emit(report, job.format)
    except GenusLabError as exc:
        print(f"genuslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
