from .files import AlgebraFile, CertificateFile, IdentityFile, WitnessFile
from .store import GraphStore, load_graph_dir, read_algebra, read_model, write_model
