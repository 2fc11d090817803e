"""ftconv command line.

Exit codes: 0 ok, 2 parse error, 3 k mismatch, 4 layout failure,
5 ordering search exhausted, 6 fault-tolerance check failed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import io
from .codes import (
    LayoutError,
    StabilizerCode,
    augment,
    augmented_iabc,
    code_logicals,
    distance_at_least_3,
    to_iabc,
    to_standard_form,
    validate,
)
from .library import LIBRARY, CodeParseError, get_code
from .pauli import ConversionCircuit
from .synth import (
    DEFAULT_BUDGET,
    InternalConsistencyError,
    KMismatchError,
    OrderingExhausted,
    QubitCountError,
    default_ancillas,
    plan_conversion,
    simplify,
    with_sign_fix,
)
from .verify import verify_circuit

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_K_MISMATCH = 3
EXIT_LAYOUT = 4
EXIT_EXHAUSTED = 5
EXIT_FT_FAIL = 6


def _fail(msg: str, code: int) -> None:
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _load(spec: str) -> StabilizerCode:
    try:
        code = get_code(spec)
    except CodeParseError as exc:
        _fail(f"{spec}: {exc}", EXIT_PARSE)
    except (KeyError, OSError) as exc:
        _fail(str(exc).strip("'\""), EXIT_PARSE)
    check = validate(code)
    if not check:
        _fail(f"{spec}: " + "; ".join(check.messages()), EXIT_PARSE)
    return code


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Fault-tolerant conversion circuits between stabilizer codes."""


@main.command()
@click.argument("source")
@click.argument("target")
@click.option("--m1", type=int, default=None, help="Ancillas added to the source.")
@click.option("--m2", type=int, default=None, help="Ancillas added to the target.")
@click.option("--verify", "do_verify", is_flag=True, help="Certify every step.")
@click.option("--simplify", "do_simplify", is_flag=True, help="Cancel repeated gates.")
@click.option("--strict-signs", is_flag=True, help="Append a Pauli frame fix so signs match too.")
@click.option("--no-schedule", is_flag=True, help="Emit the draft order without the search.")
@click.option("--prefer", type=click.Path(exists=True, dir_okay=False), help="Gate listing giving a preferred order.")
@click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True, help="Verifier-call budget.")
@click.option("--emit", type=click.Path(dir_okay=False), help="Write the circuit JSON here.")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the FT report JSON here.")
@click.option("--json", "as_json", is_flag=True, help="Print circuit JSON instead of the listing.")
def convert(source, target, m1, m2, do_verify, do_simplify, strict_signs, no_schedule, prefer, budget, emit, report, as_json):
    """Synthesize a conversion circuit from SOURCE to TARGET (file or builtin:NAME)."""
    src, tgt = _load(source), _load(target)
    if m1 is None or m2 is None:
        d1, d2 = default_ancillas(src, tgt)
        m1 = d1 if m1 is None else m1
        m2 = d2 if m2 is None else m2
    preferred = None
    if prefer:
        try:
            preferred = list(io.load_circuit(prefer))
        except ValueError as exc:
            _fail(f"{prefer}: {exc}", EXIT_PARSE)
    try:
        plan = plan_conversion(
            src, tgt, m1, m2, schedule=not no_schedule, preferred=preferred, budget=budget, strict_signs=strict_signs
        )
    except KMismatchError as exc:
        _fail(str(exc), EXIT_K_MISMATCH)
    except (QubitCountError, LayoutError) as exc:
        _fail(str(exc), EXIT_LAYOUT)
    except OrderingExhausted as exc:
        click.echo(f"best prefix ({len(exc.best_prefix)} gates): {', '.join(map(str, exc.best_prefix))}", err=True)
        if exc.failing is not None:
            click.echo(f"failing gate: {exc.failing}", err=True)
        _fail(str(exc), EXIT_EXHAUSTED)
    except InternalConsistencyError as exc:
        _fail(f"internal consistency: {exc}", EXIT_LAYOUT)

    circuit = plan.circuit
    code0 = plan.augmented_source
    if do_simplify:
        if strict_signs:
            # simplification can move the Pauli frame, so fix signs afterwards
            cut = len(circuit) - len(plan.sign_fix)
            base = ConversionCircuit(circuit.n, circuit.gates[:cut], circuit.phases[:cut])
            circuit, _ = with_sign_fix(simplify(base, code0), code0, plan.augmented_target)
        else:
            circuit = simplify(circuit, code0)

    click.echo(io.circuit_to_json(circuit) if as_json else io.phase_listing(circuit))
    if emit:
        Path(emit).write_text(io.circuit_to_json(circuit) + "\n")
    signs = plan.final_signs(circuit)
    click.echo(f"# {len(circuit)} gates, {circuit.two_qubit_count()} two-qubit; final signs {signs}", err=True)

    if do_verify or report:
        bundle = verify_circuit(code0, circuit, exhaustive=bool(report))
        if report:
            Path(report).write_text(io.report_to_json(bundle, signs=signs) + "\n")
        if do_verify:
            click.echo(io.format_report(bundle).splitlines()[-1], err=True)
        if not bundle.passed:
            first = bundle.first_failure
            _fail(f"step {first.step_index + 1} ({first.gate}): {first.reason}", EXIT_FT_FAIL)


@main.command()
@click.argument("code")
@click.option("--standard", "mode", flag_value="standard", help="Standard form.")
@click.option("--iabc", "mode", flag_value="iabc", help="IABC form.")
@click.option("--logicals", "mode", flag_value="logicals", help="Logical X and Z operators.")
@click.option("--augment", "m", type=int, default=0, help="Append m |+> ancillas first.")
def forms(code, mode, m):
    """Print a code's generators in block form."""
    c = _load(code)
    try:
        if mode == "standard":
            sf = to_standard_form(augment(c, m))
            click.echo(f"# r={sf.r} swaps: {', '.join(map(str, sf.swaps)) or '-'}")
            click.echo(io.format_code_matrix(sf.base))
        elif mode == "iabc":
            form = augmented_iabc(c, m) if m else to_iabc(to_standard_form(c))
            click.echo(f"# record: {', '.join(map(str, form.u_record)) or '-'}")
            click.echo(io.format_code_matrix(form.code))
        elif mode == "logicals":
            xs, zs = code_logicals(augment(c, m))
            for i, (x, z) in enumerate(zip(xs, zs), start=1):
                click.echo(f"X{i} {x}")
                click.echo(f"Z{i} {z}")
        else:
            click.echo(io.format_code_matrix(augment(c, m)))
    except LayoutError as exc:
        _fail(str(exc), EXIT_LAYOUT)


@main.command("verify")
@click.argument("circuit", type=click.Path(exists=True, dir_okay=False))
@click.argument("code")
@click.option("--m", "m", type=int, default=0, help="Ancillas appended to CODE.")
@click.option("--exhaustive", is_flag=True, help="Check every step even after a failure.")
@click.option("--tables", is_flag=True, help="Print the two-qubit error tables.")
@click.option("--report", type=click.Path(dir_okay=False), help="Write the report JSON here.")
def verify_cmd(circuit, code, m, exhaustive, tables, report):
    """Certify every step of CIRCUIT applied to CODE plus m ancillas."""
    code0 = augment(_load(code), m)
    try:
        circ = io.load_circuit(circuit, code0.n)
    except ValueError as exc:
        _fail(f"{circuit}: {exc}", EXIT_PARSE)
    bundle = verify_circuit(code0, circ, exhaustive=exhaustive)
    click.echo(io.format_report(bundle, tables=tables))
    if report:
        Path(report).write_text(io.report_to_json(bundle) + "\n")
    if not bundle.passed:
        sys.exit(EXIT_FT_FAIL)


@main.command()
@click.argument("code")
@click.option("--m", "m", type=int, default=0, help="Ancillas appended first.")
def distance(code, m):
    """Report whether CODE has distance at least 3."""
    c = augment(_load(code), m)
    check = distance_at_least_3(c)
    if check.ok:
        click.echo(f"[[{c.n},{c.k}]] distance >= 3")
    else:
        click.echo(f"[[{c.n},{c.k}]] distance < 3, logical {check.witness}")
        sys.exit(EXIT_FT_FAIL)


@main.command()
@click.option("--json", "as_json", is_flag=True)
def library(as_json):
    """List the builtin codes."""
    rows = [(e.name, e.code, e.note) for e in LIBRARY.values()]
    if as_json:
        click.echo(json.dumps([{"name": n, "n": c.n, "k": c.k, "note": note} for n, c, note in rows], indent=1))
        return
    for name, c, note in rows:
        click.echo(f"builtin:{name:<11} [[{c.n},{c.k}]]  {note}")


if __name__ == "__main__":
    main()
