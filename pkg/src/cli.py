import json
import logging

import click
from pydantic import ValidationError

from src import config
from src.catalog import families, instantiate, parse_label
from src.certificates import verify_certificate
from src.classify import classify
from src.degeneration import search_witness, verify_degeneration
from src.errors import NilalgError, NotNil, OutsideCatalog
from src.graph import build_and_verify
from src.invariants import fingerprint
from src.models import (
    AlgebraFile, CertificateFile, IdentityFile, WitnessFile, read_model, write_model,
)
from src.nil import check_partial_linearizations, check_trilinear_identity, nil_index, satisfied_identities
from src.utils.literals import format_value, parse_scalar

logger = logging.getLogger(__name__)


def _emit(data):
    click.echo(json.dumps(data, indent=2, default=str))


def _load(path, model):
    try:
        return read_model(path, model)
    except (ValidationError, ValueError, NilalgError) as e:
        raise click.BadParameter(f"{path}: {e}") from e


def _param(value: str):
    """``alpha=2`` -> {"alpha": Scalar(2)}."""
    if value is None:
        return None
    name, _, literal = value.partition("=")
    if name.strip() not in ("alpha", "beta") or not literal:
        raise click.BadParameter(f"expected alpha=<value>, got '{value}'")
    try:
        return {"alpha": parse_scalar(literal)}
    except NilalgError as e:
        raise click.BadParameter(str(e)) from e


def _load_algebra(path, param: str = None):
    A = _load(path, AlgebraFile).to_algebra()
    values = _param(param)
    return A.instantiate(values) if values else A


def _matrix(rows) -> list:
    return [[format_value(x) for x in row] for row in rows]


@click.group()
@click.option("--log-level", default=None, help="Overrides NILALG_LOG_LEVEL.")
def cli(log_level):
    """Exact tools for three-dimensional nilalgebras and their degenerations."""
    config.configure_logging(log_level)


@cli.command("nil-index")
@click.argument("algebra", type=click.Path(exists=True))
@click.option("--max-k", default=config.MAX_K, show_default=True, type=int)
def nil_index_cmd(algebra, max_k):
    """Nil index of the algebra in ALGEBRA."""
    result = nil_index(_load_algebra(algebra), max_k)
    _emit({"result": str(result), "index": result.index, "k_max": result.k_max,
           "samples": {str(k): str(v) for k, v in result.samples.items()}})


@cli.command("invariants")
@click.argument("algebra", type=click.Path(exists=True))
@click.option("--param", default=None, help="alpha=<value> for a parametric table.")
def invariants_cmd(algebra, param):
    """Isomorphism-invariant fingerprint."""
    _emit(fingerprint(_load_algebra(algebra, param)).as_dict())


@cli.command("identities")
@click.argument("algebra", type=click.Path(exists=True))
@click.option("--identity", "identity_files", multiple=True, type=click.Path(exists=True),
              help="Extra identity file; may be repeated.")
def identities_cmd(algebra, identity_files):
    """Which named degree-3 identities hold in the algebra."""
    A = _load_algebra(algebra)
    out = dict(satisfied_identities(A))
    out["partial-linearizations"] = check_partial_linearizations(A)
    for path in identity_files:
        spec = _load(path, IdentityFile)
        out[spec.name] = str(check_trilinear_identity(A, spec.to_terms()))
    _emit(out)


@cli.group("catalog")
def catalog_cmd():
    """The classification list."""


@catalog_cmd.command("list")
def catalog_list():
    _emit(families())


@catalog_cmd.command("emit")
@click.argument("label")
@click.option("--param", default=None, help="alpha=<value> for a parametric family.")
@click.option("-o", "--output", type=click.Path(), default=None)
def catalog_emit(label, param, output):
    """Write the table of LABEL as an algebra file."""
    values = _param(param)
    try:
        A = instantiate(parse_label(label, format_value(values["alpha"]) if values else None))
    except NilalgError as e:
        raise click.BadParameter(str(e)) from e
    data = AlgebraFile.from_algebra(A)
    if output:
        write_model(output, data)
    else:
        click.echo(data.model_dump_json(indent=2))


@cli.command("classify")
@click.argument("algebra", type=click.Path(exists=True))
def classify_cmd(algebra):
    """Catalog label and basis change for a 3-dimensional nilalgebra."""
    A = _load_algebra(algebra)
    try:
        result = classify(A)
    except (NotNil, OutsideCatalog) as e:
        logger.error(f"classification failed: {e}")
        _emit({"error": type(e).__name__, "message": str(e)})
        raise SystemExit(1)
    _emit({"label": str(result.label), "rows": _matrix(result.rows),
           "basis_change": _matrix(result.basis_change),
           "collides_with": [str(x) for x in result.collides_with]})


@cli.command("verify-degeneration")
@click.argument("witness", type=click.Path(exists=True))
def verify_degeneration_cmd(witness):
    """Check a stored witness E(t)."""
    try:
        w = _load(witness, WitnessFile).to_witness()
    except NilalgError as e:
        raise click.BadParameter(str(e)) from e
    verdict = verify_degeneration(w)
    _emit({"witness": w.describe(), "verdict": str(verdict)})
    if not verdict:
        logger.error(f"{w.describe()}: {verdict}")
        raise SystemExit(1)


@cli.command("search-witness")
@click.argument("source")
@click.argument("target")
@click.option("--max-pow", default=config.SEARCH_MAX_POW, show_default=True, type=int)
@click.option("--row-terms", default=config.SEARCH_ROW_TERMS, show_default=True, type=int)
@click.option("--n-jobs", default=config.N_JOBS, show_default=True, type=int)
@click.option("-o", "--output", type=click.Path(), default=None)
def search_witness_cmd(source, target, max_pow, row_terms, n_jobs, output):
    """Bounded search for a witness of SOURCE -> TARGET.

    SOURCE is a catalog label or an algebra file.
    """
    src = _load_algebra(source) if source.endswith(".json") else source
    try:
        result = search_witness(src, target, max_pow=max_pow, row_terms=row_terms, n_jobs=n_jobs)
    except NilalgError as e:
        raise click.BadParameter(str(e)) from e
    if not result:
        _emit({"result": "Exhausted", "tried": result.tried, "reason": result.reason})
        raise SystemExit(1)
    data = WitnessFile.from_witness(result.witness)
    if output:
        write_model(output, data)
    _emit({"result": "Found", "tried": result.tried,
           "witness": data.model_dump(exclude_none=True)})


@cli.command("verify-nondegeneration")
@click.argument("certificate", type=click.Path(exists=True))
@click.option("--groebner-budget", default=config.GROEBNER_BUDGET, show_default=True, type=int)
def verify_nondegeneration_cmd(certificate, groebner_budget):
    """Re-check a stored non-degeneration certificate."""
    try:
        cert = _load(certificate, CertificateFile).to_certificate()
    except NilalgError as e:
        raise click.BadParameter(str(e)) from e
    check = verify_certificate(cert, groebner_budget)
    _emit({"certificate": cert.describe(), "valid": check.valid, "details": check.details})
    if not check:
        logger.error(f"{cert.describe()} did not check")
        raise SystemExit(1)


@cli.command("verify-graph")
@click.argument("graph_dir", type=click.Path(exists=True, file_okay=False), required=False)
@click.option("--groebner-budget", default=config.GROEBNER_BUDGET, show_default=True, type=int)
@click.option("--n-jobs", default=config.N_JOBS, show_default=True, type=int)
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Also write the JSON report here.")
def verify_graph_cmd(graph_dir, groebner_budget, n_jobs, report_path):
    """Verify every witness and certificate under GRAPH_DIR and report."""
    _, out = build_and_verify(graph_dir, n_jobs=n_jobs, budget=groebner_budget)
    text = json.dumps(out, indent=2, default=str)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    click.echo(text)
    click.echo(f"{len(out['nodes'])} vertices, {len(out['edges'])} edges, "
               f"{len(out['non_edges'])} non-edges", err=True)
    click.echo(f"rigid: {', '.join(out['rigid'])}; dimension {out['dimension']}", err=True)
    for root, ok in out["expected_closures_match"].items():
        click.echo(f"closure of {root}: {'as expected' if ok else 'DIFFERS'}", err=True)
    if out.get("uncovered"):
        click.echo(f"{len(out['uncovered'])} uncovered pairs", err=True)
    if out["failures"]:
        logger.error(f"{len(out['failures'])} stored items failed verification")
        raise SystemExit(1)
