"""Batch command-line harness.

Subcommands: ring-info, canon, search, verify, enumerate.  Every flag can
also be supplied through an environment variable with the UNIORTHO prefix
(e.g. UNIORTHO_VERIFY_FORMAT=json).  Exit codes: 0 success, 1 verification
mismatch, 2 configuration/input error, 3 search timeout.
"""

from __future__ import annotations

import functools
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .catalog import default_catalog_text, format_ring_spec, parse_ring_literal
from .config import parse_config
from .errors import SearchTimeout, UniorthoError
from .forms import (
    BilinearForm,
    apply_congruence,
    canonical_matrix,
    canonicalize,
    format_matrix,
    parse_matrix,
)
from .orthosets import (
    DEFAULT_SEARCH_TIMEOUT,
    classify_maximum_set,
    enumerate_maximum_sets,
    max_orthogonal_set,
    verify_closed_form,
)
from .reporting import render_report, report_rows, write_report
from .rings import (
    DEFAULT_ENUMERATION_BOUND,
    LocalRing,
    canonical_nonsquare,
    construct_ring,
)
from .vectors import format_vector

#: Catalog entries with more unimodular vectors than this only run with --full.
FULL_ONLY_VERTEX_THRESHOLD = 1000

#: Default enumeration cap for the `enumerate` subcommand (|R| <= 27).
ENUMERATE_DEFAULT_MAX_CARD = 27 ** 2


def _fail_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SearchTimeout as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(3)
        except UniorthoError as err:
            click.echo(f"error: {err}", err=True)
            sys.exit(2)

    return wrapper


def _ring_from_literal(literal: str, max_card: int) -> LocalRing:
    return construct_ring(parse_ring_literal(literal), verify_bound=max_card)


def _form_from_options(ring: LocalRing, form_literal: str | None, canonical: str, n: int) -> BilinearForm:
    if form_literal is not None:
        return BilinearForm(ring, parse_matrix(ring, form_literal))
    u = ring.one if canonical == "square" else canonical_nonsquare(ring)
    return BilinearForm(ring, canonical_matrix(ring, n, u))


@click.group(context_settings={"auto_envvar_prefix": "UNIORTHO"})
def main():
    """Exact orthogonal-set search over finite local rings of odd characteristic."""


@main.command("ring-info")
@click.argument("ring_literal", metavar="RING")
@click.option("--max-card", type=int, default=DEFAULT_ENUMERATION_BOUND, show_default=True,
              help="Enumeration bound for exhaustive per-ring statistics.")
@_fail_codes
def ring_info(ring_literal: str, max_card: int):
    """Show order, ideal and square-class data for RING (e.g. Z9, F25, 'GR(9,2)')."""
    ring = _ring_from_literal(ring_literal, max_card)
    units = ring.units(max_card)
    squares = {ring.mul(u, u) for u in units}
    lines = [
        f"label={ring.label}",
        f"spec={format_ring_spec(ring.spec)}",
        f"cardinality={ring.cardinality}",
        f"maximal_ideal_size={ring.maximal_ideal_size}",
        f"characteristic={ring.characteristic}",
        f"residue_field_order={ring.residue_field_order}",
        f"nonsquare={ring.format_element(canonical_nonsquare(ring, max_card))}",
        f"unit_squares={len(squares)}",
    ]
    click.echo("\n".join(lines))


@main.command()
@click.argument("ring_literal", metavar="RING")
@click.argument("matrix_literal", metavar="MATRIX")
@click.option("--max-card", type=int, default=DEFAULT_ENUMERATION_BOUND, show_default=True)
@_fail_codes
def canon(ring_literal: str, matrix_literal: str, max_card: int):
    """Canonicalize the symmetric form MATRIX (row-major, e.g. '0,1;1,0') over RING."""
    ring = _ring_from_literal(ring_literal, max_card)
    form = BilinearForm(ring, parse_matrix(ring, matrix_literal))
    transform, canonical = canonicalize(form)
    verified = apply_congruence(form, transform.matrix).matrix == canonical.matrix()
    lines = [
        f"ring={ring.label}",
        f"matrix={format_matrix(ring, form.matrix)}",
        f"u={ring.format_element(canonical.u)}",
        f"nonsquare={ring.format_element(canonical_nonsquare(ring, max_card))}",
        f"canonical={format_matrix(ring, canonical.matrix())}",
        f"transform={format_matrix(ring, transform.matrix)}",
        f"verified={'true' if verified else 'false'}",
    ]
    click.echo("\n".join(lines))


@main.command()
@click.argument("ring_literal", metavar="RING")
@click.option("--form", default=None,
              help="Matrix literal; defaults to the chosen canonical form.")
@click.option("--canonical", type=click.Choice(["square", "nonsquare"]), default="square",
              show_default=True, help="Which canonical form to search when --form is absent.")
@click.option("--n", type=click.Choice(["2", "3"]), default="2", show_default=True,
              help="Vector dimension (3 is exploratory).")
@click.option("--timeout", type=float, default=DEFAULT_SEARCH_TIMEOUT, show_default=True)
@click.option("--max-card", type=int, default=DEFAULT_ENUMERATION_BOUND, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help="Worker processes for the clique search.")
@click.option("--seq", is_flag=True, help="Force sequential search.")
@click.option("--timings", is_flag=True, help="Print wall-clock time (non-reproducible).")
@_fail_codes
def search(ring_literal, form, canonical, n, timeout, max_card, workers, seq, timings):
    """Exact maximum orthogonal set for one ring and form."""
    n = int(n)
    ring = _ring_from_literal(ring_literal, max_card)
    form = _form_from_options(ring, form, canonical, n)
    result = max_orthogonal_set(form, n, timeout, max_card, workers=1 if seq else workers)
    lines = [
        f"ring={ring.label}",
        f"matrix={format_matrix(ring, form.matrix)}",
        f"n={n}",
        f"max_size={result.max_size}",
        "witness=" + ",".join(format_vector(ring, v) for v in result.witness.vectors),
        f"node_count={result.node_count}",
    ]
    if timings:
        lines.append(f"elapsed_ms={int(result.elapsed * 1000)}")
    click.echo("\n".join(lines))


@main.command("enumerate")
@click.argument("ring_literal", metavar="RING")
@click.option("--form", default=None,
              help="Matrix literal; defaults to the chosen canonical form.")
@click.option("--canonical", type=click.Choice(["square", "nonsquare"]), default="square",
              show_default=True)
@click.option("--timeout", type=float, default=DEFAULT_SEARCH_TIMEOUT, show_default=True)
@click.option("--max-card", type=int, default=ENUMERATE_DEFAULT_MAX_CARD, show_default=True,
              help="Vector enumeration bound; the default admits |R| <= 27.")
@_fail_codes
def enumerate_cmd(ring_literal, form, canonical, timeout, max_card):
    """List every maximum orthogonal set with a family classification tag."""
    ring = _ring_from_literal(ring_literal, max_card)
    form = _form_from_options(ring, form, canonical, 2)
    sets = enumerate_maximum_sets(form, 2, timeout, max_card)
    lines = [
        f"ring={ring.label}",
        f"matrix={format_matrix(ring, form.matrix)}",
        f"max_size={len(sets[0]) if sets else 0}",
        f"count={len(sets)}",
    ]
    for oset in sets:
        vecs = ",".join(format_vector(ring, v) for v in oset.vectors)
        lines.append(f"set={vecs} family={classify_maximum_set(oset)}")
    click.echo("\n".join(lines))


def _verify_entry(args):
    spec, entry_label, timeout, max_card = args
    ring = construct_ring(spec, verify_bound=max_card)
    return verify_closed_form(ring, timeout, max_card, label=entry_label)


@main.command()
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Catalog config; defaults to the built-in catalog.")
@click.option("--format", type=click.Choice(["csv", "json"]), default=None,
              help="Report format (default: config value, then csv).")
@click.option("--out", default=None, help="Report path (default: stdout).")
@click.option("--timeout", type=float, default=None,
              help="Per-(ring, form) search budget in seconds.")
@click.option("--max-card", type=int, default=None, help="Enumeration bound override.")
@click.option("--workers", type=int, default=None,
              help="Verify this many rings concurrently (default: up to 4).")
@click.option("--seq", is_flag=True, help="Force fully sequential verification.")
@click.option("--full", is_flag=True,
              help="Include the oversized built-in catalog entries (GR(9,2)).")
@click.option("--timings", is_flag=True,
              help="Fill elapsed_ms (makes reports non-reproducible).")
@_fail_codes
def verify(config, format, out, timeout, max_card, workers, seq, full, timings):
    """Verify brute-force maxima against the closed form for a ring catalog."""
    if config is None:
        cfg = parse_config(default_catalog_text())
    else:
        cfg = parse_config(Path(config).read_text(encoding="utf-8"))
    entries = list(cfg.rings)
    if config is None and not full:
        entries = [
            e
            for e in entries
            if e.ring.cardinality ** 2 - e.ring.maximal_ideal_size ** 2
            <= FULL_ONLY_VERTEX_THRESHOLD
        ]
    timeout = cfg.timeout_secs if timeout is None else timeout
    max_card = cfg.max_card if max_card is None else max_card
    format = cfg.format if format is None else format
    out = cfg.out if out is None else out
    if workers is None:
        workers = min(4, os.cpu_count() or 1)
    if seq:
        workers = 1

    rows = []
    if workers <= 1 or len(entries) <= 1:
        for entry in entries:
            rows.extend(verify_closed_form(entry.ring, timeout, max_card, label=entry.label).rows)
    else:
        jobs = [(entry.spec, entry.label, timeout, max_card) for entry in entries]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for verification in pool.map(_verify_entry, jobs):
                rows.extend(verification.rows)

    dicts = report_rows(rows, timings=timings)
    text = render_report(dicts, format)
    if out:
        write_report(text, out)
        click.echo(f"wrote {len(dicts)} rows to {out}", err=True)
    else:
        click.echo(text, nl=False)
    mismatches = sum(1 for row in dicts if not row["match"])
    status = "PASS" if mismatches == 0 else f"FAIL ({mismatches} mismatching rows)"
    click.echo(f"verify: {len(dicts)} rows, {status}", err=True)
    if mismatches:
        sys.exit(1)


if __name__ == "__main__":
    main()
