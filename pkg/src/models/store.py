import logging
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel, ValidationError

from src.errors import NilalgError
from src.models.files import AlgebraFile, CertificateFile, WitnessFile

logger = logging.getLogger(__name__)


def read_model(path, model: type[BaseModel]) -> BaseModel:
    return model.model_validate_json(Path(path).read_text(encoding="utf-8"))


def write_model(path, data: BaseModel):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(data.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")


def read_algebra(path):
    return read_model(path, AlgebraFile).to_algebra()


@dataclass
class GraphStore:
    """Everything a graph directory holds, plus the files that did not load."""

    witnesses: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    errors: list = field(default_factory=list)


def _load_dir(directory: Path, model, convert, out: list, errors: list):
    for path in sorted(directory.glob("*.json")):
        try:
            out.append(convert(read_model(path, model)))
        except (ValidationError, ValueError, NilalgError) as e:
            logger.error(f"could not load {path}: {e}")
            errors.append({"file": str(path), "reason": str(e)})


def load_graph_dir(graph_dir) -> GraphStore:
    """Read ``witnesses/*.json`` and ``certificates/*.json`` under ``graph_dir``."""
    root = Path(graph_dir)
    store = GraphStore()
    _load_dir(root / "witnesses", WitnessFile, WitnessFile.to_witness,
              store.witnesses, store.errors)
    _load_dir(root / "certificates", CertificateFile, CertificateFile.to_certificate,
              store.certificates, store.errors)
    logger.info(f"loaded {len(store.witnesses)} witnesses and {len(store.certificates)} "
                f"certificates from {root}")
    return store
