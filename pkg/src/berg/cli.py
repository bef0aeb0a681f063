"""Command-line interface.

Exit codes: 0 all requested checks pass, 1 a verification failed,
2 usage error (malformed arguments or input files).
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import verify as verify_mod
from .algebraic import (
    SURFACES,
    boundary_leading_coefficient,
    fit_relation,
    fit_surface_relation,
)
from .ball import ball_kernel, levi_form, sphere_defining_function, u_domain_defining_function
from .groups import generate_group, is_fixed_point_free, is_reflection, matrices_from_json
from .hartogs import (
    MomentTable,
    kernel_series,
    monomial_norm,
    omega_closed_kernel,
)
from .invariants import compute_basic_map, find_syzygies
from .polynomials import HermitianPolynomial, HoloPolynomial, MultiIndex
from .quotient import CoveringSpec, deck_sum_kernel, pushforward_kernel
from .scalars import to_complex


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"cannot parse complex list {text!r}: {exc}")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read {path}: {exc}")


def _cache_dir() -> Path:
    root = os.environ.get("BERG_CACHE_DIR")
    path = Path(root) if root else Path.home() / ".cache" / "berg"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _holo_from_json(data) -> HoloPolynomial:
    return HoloPolynomial(
        int(data["dim"]),
        {
            MultiIndex(alpha): complex(re, im)
            for alpha, re, im in data["terms"]
        },
    )


def _pairs_from_json(data) -> list[tuple[tuple, tuple]]:
    out = []
    for z, w in data:
        out.append(
            (
                tuple(complex(a, b) for a, b in z),
                tuple(complex(a, b) for a, b in w),
            )
        )
    return out


@click.group()
def main():
    """Bergman kernels of balls, ball quotients and Hartogs domains."""


@main.command("ball-kernel")
@click.option("--dim", type=int, required=True)
@click.option("--z", "z_text", required=True, help="comma-separated complex coordinates")
@click.option("--w", "w_text", required=True)
def ball_kernel_cmd(dim, z_text, w_text):
    """Evaluate the unit-ball kernel at (z, w)."""
    z = _parse_complex_list(z_text)
    w = _parse_complex_list(w_text)
    if len(z) != dim or len(w) != dim:
        raise click.UsageError("coordinate count must match --dim")
    value = to_complex(ball_kernel(dim, z, w))
    click.echo(json.dumps({"re": value.real, "im": value.imag}, sort_keys=True))


@main.command("levi")
@click.option("--rho", "rho_src", required=True,
              help="JSON polynomial file, or one of sphere-<n>, u-domain")
@click.option("--point", "point_text", required=True)
def levi_cmd(rho_src, point_text):
    """Levi-form eigenvalues of a defining function at a boundary point."""
    if rho_src.startswith("sphere-"):
        rho = sphere_defining_function(int(rho_src.split("-", 1)[1]))
    elif rho_src == "u-domain":
        rho = u_domain_defining_function()
    else:
        rho = HermitianPolynomial.from_json_dict(_load_json(rho_src))
    point = _parse_complex_list(point_text)
    try:
        report = levi_form(rho, point)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    payload = {
        "smooth": report.smooth,
        "eigenvalues": None if report.eigenvalues is None else list(report.eigenvalues),
        "strictly_pseudoconvex": report.strictly_pseudoconvex,
        "gradient_norm": report.gradient_norm,
    }
    click.echo(json.dumps(payload, sort_keys=True))


@main.command("group")
@click.option("--gens", "gens_file", required=True, help="JSON list of generator matrices")
@click.option("--check", "check_kind", type=click.Choice(["fpf", "reflections"]), default=None)
@click.option("--max-order", type=int, default=4096)
def group_cmd(gens_file, check_kind, max_order):
    """Generate the closure of unitary generators; optionally run checks."""
    gens = matrices_from_json(_load_json(gens_file))
    group = generate_group(gens, max_order=max_order)
    payload = {"order": group.order, "dim": group.dim, "exact": group.exact}
    if check_kind == "fpf":
        report = is_fixed_point_free(group)
        payload["fixed_point_free"] = report.free
        if report.witness is not None:
            g, vec = report.witness
            payload["witness_vector"] = [[v.real, v.imag] for v in vec]
    elif check_kind == "reflections":
        payload["reflections"] = sum(
            1 for g in group if not g.is_identity() and is_reflection(g)
        )
    click.echo(json.dumps(payload, sort_keys=True))


@main.command("basic-map")
@click.option("--group", "group_file", required=True)
@click.option("--syzygies", "syzygy_degree", type=int, default=0)
@click.option("--max-order", type=int, default=4096)
@click.option("--no-cache", is_flag=True, default=False)
def basic_map_cmd(group_file, syzygy_degree, max_order, no_cache):
    """Minimal invariant generators (and optional relations) for a group."""
    gens = matrices_from_json(_load_json(group_file))
    group = generate_group(gens, max_order=max_order)
    cache_key = f"{group.canonical_hash()}-syz{syzygy_degree}"
    cache_file = _cache_dir() / f"basic-map-{cache_key}.json"
    if not no_cache and cache_file.exists():
        click.echo(cache_file.read_text().strip())
        return
    if not group.exact:
        raise click.UsageError(
            "basic map needs exact matrices; encode entries as zeta terms"
        )
    basic = compute_basic_map(group)
    payload = basic.to_json_dict()
    if syzygy_degree >= 2:
        relations = find_syzygies(basic, degree_bound=syzygy_degree)
        payload["syzygies"] = [
            {
                "terms": [
                    [list(beta), to_complex(c).real, to_complex(c).imag]
                    for beta, c in sorted(s.relation.terms.items(), key=lambda kv: tuple(kv[0]))
                ]
            }
            for s in relations
        ]
    text = json.dumps(payload, sort_keys=True)
    if not no_cache:
        cache_file.write_text(text + "\n")
    click.echo(text)


@main.command("quotient-sum")
@click.option("--group", "group_file", required=True)
@click.option("--dim", type=int, required=True)
@click.option("--pairs", "pairs_file", required=True)
@click.option("--max-order", type=int, default=4096)
def quotient_sum_cmd(group_file, dim, pairs_file, max_order):
    """Deck-transformation kernel sums at sample pairs, as CSV."""
    gens = matrices_from_json(_load_json(group_file))
    group = generate_group(gens, max_order=max_order)
    pairs = _pairs_from_json(_load_json(pairs_file))
    writer = csv.writer(sys.stdout)
    writer.writerow(["z", "w", "re", "im"])
    for z, w in pairs:
        value = to_complex(deck_sum_kernel(group, dim, z, w))
        writer.writerow([repr(list(z)), repr(list(w)), value.real, value.imag])


@main.command("quotient-push")
@click.option("--cover", "cover_file", required=True,
              help="JSON {generators, map, chart?, max_order?}")
@click.option("--pairs", "pairs_file", required=True)
def quotient_push_cmd(cover_file, pairs_file):
    """Push the ball kernel to the quotient in chart coordinates, as CSV."""
    data = _load_json(cover_file)
    gens = matrices_from_json(data["generators"])
    group = generate_group(gens, max_order=int(data.get("max_order", 4096)))
    cover_map = tuple(_holo_from_json(p) for p in data["map"])
    chart = tuple(data.get("chart", range(group.dim)))
    spec = CoveringSpec(group=group, cover_map=cover_map, chart=chart)
    pairs = _pairs_from_json(_load_json(pairs_file))
    writer = csv.writer(sys.stdout)
    writer.writerow(["z", "w", "re", "im"])
    for z, w in pairs:
        value = to_complex(pushforward_kernel(spec, z, w))
        writer.writerow([repr(list(z)), repr(list(w)), value.real, value.imag])


@main.command("omega-kernel")
@click.option("--z", "z_text", required=True, help="two comma-separated complex numbers")
@click.option("--lambda", "lam_text", required=True)
@click.option("--w", "w_text", default=None)
@click.option("--tau", "tau_text", default=None)
@click.option("--series", "series_m", type=int, default=0,
              help="use the series kernel with this truncation instead of the closed form")
@click.option("--closed", "use_closed", is_flag=True, default=True)
def omega_kernel_cmd(z_text, lam_text, w_text, tau_text, series_m, use_closed):
    """Kernel of the standard Hartogs domain (closed form by default)."""
    z = _parse_complex_list(z_text)
    lam = _parse_complex_list(lam_text)[0]
    w = _parse_complex_list(w_text) if w_text else z
    tau = _parse_complex_list(tau_text)[0] if tau_text else lam
    if len(z) != 2 or len(w) != 2:
        raise click.UsageError("--z/--w need exactly two components")
    if series_m > 0:
        result = kernel_series(z, lam, w, tau, truncation=series_m)
        value = result.value
        payload = {"re": value.real, "im": value.imag, "tail_bound": result.tail_bound,
                   "terms": result.terms}
    else:
        value = to_complex(omega_closed_kernel(z, lam, w, tau))
        payload = {"re": value.real, "im": value.imag}
    click.echo(json.dumps(payload, sort_keys=True))


@main.command("moments")
@click.option("--m", "m_value", type=int, required=True)
@click.option("--alpha", "alpha_text", required=True, help="comma-separated exponents")
@click.option("--exact/--numeric", "want_exact", default=True)
def moments_cmd(m_value, alpha_text, want_exact):
    """Squared norm of the fiber monomial lambda^m z^alpha."""
    alpha = tuple(int(a) for a in alpha_text.split(","))
    table = MomentTable()
    entry = table.norm(m_value, alpha)
    if want_exact:
        exact = entry.exact
        if exact == math.inf:
            click.echo(json.dumps({"exact": "infinite"}))
            return
        payload = {
            "exact": {
                "re": [str(exact.re)],
                "pi_power": exact.pi_pow,
            },
            "numeric": entry.numeric,
        }
    else:
        payload = {"numeric": entry.numeric}
    click.echo(json.dumps(payload, sort_keys=True))


@main.command("omega-grid")
@click.option("--rmax", type=float, default=2.0, help="max |z_i|^2 on the grid")
@click.option("--steps", type=int, default=8)
@click.option("--fiber", type=float, default=0.5, help="|lambda|^2 h as a fraction of 1")
def omega_grid_cmd(rmax, steps, fiber):
    """CSV grid of diagonal kernel values over base radii."""
    writer = csv.writer(sys.stdout)
    writer.writerow(["r1", "r2", "value"])
    for i in range(steps):
        for j in range(steps):
            r1 = rmax * (i + 0.5) / steps
            r2 = rmax * (j + 0.5) / steps
            h = (1.0 + r1) * (1.0 + r2)
            lam = math.sqrt(fiber / h)
            z = (math.sqrt(r1), math.sqrt(r2))
            value = to_complex(omega_closed_kernel(z, lam, z, lam))
            writer.writerow([r1, r2, value.real])


@main.command("fit")
@click.option("--kernel", "kernel_name", required=True,
              help="disk | ball2 | omega | annulus | a JSON samples file")
@click.option("--dz", type=int, required=True)
@click.option("--dk", type=int, required=True)
@click.option("--boundary-check", is_flag=True, default=False)
@click.option("--samples", "count", type=int, default=None)
@click.option("--seed", type=int, default=0)
def fit_cmd(kernel_name, dz, dk, boundary_check, count, seed):
    """Fit a polynomial relation to diagonal kernel samples."""
    if kernel_name in SURFACES:
        surface = SURFACES[kernel_name]()
        try:
            relation = fit_surface_relation(surface, dz, dk, count=count, seed=seed)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        boundary_max = None
        if boundary_check:
            feats = surface.boundary_features(50, seed=seed)
            boundary_max = boundary_leading_coefficient(relation, feats)
    else:
        data = _load_json(kernel_name)
        samples = [(tuple(f), float(k)) for f, k in zip(data["features"], data["values"])]
        try:
            relation = fit_relation(samples, dz, dk)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        boundary_max = None
        if boundary_check and "boundary_features" in data:
            boundary_max = boundary_leading_coefficient(
                relation, [tuple(f) for f in data["boundary_features"]]
            )
    payload = {
        "residual": relation.residual,
        "k_degree": relation.k_degree,
        "feature_degree": relation.feature_degree,
        "coefficients": [
            [list(beta), j, c] for (beta, j), c in sorted(
                relation.coefficients.items(), key=lambda kv: (kv[0][1], tuple(kv[0][0]))
            )
        ],
    }
    if boundary_max is not None:
        payload["boundary_max"] = boundary_max
    click.echo(json.dumps(payload, sort_keys=True))


@main.command("verify")
@click.argument("which", type=click.Choice(["repro", "transform", "isometry", "orthogonality"]))
@click.option("--seed", type=int, default=0)
@click.option("--n", "--N", "n_samples", type=int, default=1_000_000)
@click.option("--tol", type=float, default=None)
def verify_cmd(which, seed, n_samples, tol):
    """Run a verification suite; one JSON line per check."""
    if which == "repro":
        reports = verify_mod.suite_repro(seed=seed, n_samples=n_samples)
    elif which == "orthogonality":
        reports = verify_mod.suite_orthogonality(seed=seed, n_samples=n_samples)
    elif which == "transform":
        reports = verify_mod.suite_transform(seed=seed)
    else:
        reports = verify_mod.suite_isometry()
    if tol is not None:
        reports = [
            verify_mod.VerificationReport(
                name=r.name,
                passed=(r.residual is not None and r.residual <= tol) or
                       (r.residual is None and r.passed),
                residual=r.residual,
                tolerance=tol if r.residual is not None else r.tolerance,
                estimate=r.estimate,
                stderr=r.stderr,
                target=r.target,
                inputs=r.inputs,
                runtime=r.runtime,
            )
            for r in reports
        ]
    all_pass = True
    for r in reports:
        click.echo(r.to_json())
        all_pass = all_pass and r.passed
    sys.exit(0 if all_pass else 1)


if __name__ == "__main__":
    main()
