"""Exact small-scale toolkit for certificate complexity, unambiguous DNFs,
cheat-sheet style reductions, EAH hypergraphs and the HEX function."""

__version__ = "0.1.0"

from .boolfun import (  # noqa: F401
    NOTONE,
    NOTZERO,
    ONE,
    UNDETERMINED,
    ZERO,
    CertificateFamily,
    Out,
    PartialFunction,
    Restriction,
    Role,
    check_unambiguous,
    is_certificate,
    is_consistent,
)
