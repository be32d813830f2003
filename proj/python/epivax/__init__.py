"""Vaccine allocation for networked SIS epidemics."""

import json as _json

from ._epivax import (
    CostForm,
    CutBudgetExhausted,
    DiscreteAllocation,
    DomainError,
    DualCertificate,
    EpidemicInstance,
    FractionalAllocation,
    Graph,
    InfeasibleInstance,
    Method,
    SchemaError,
    adjacency_spectral_radius,
    allocate,
    barabasi_albert,
    critical_beta,
    dual_value,
    eigenvector_centrality,
    load_edge_list,
    parse_edge_list,
    serialize_edge_list,
    simulate_meanfield,
    solve_dual,
    solve_fractional,
    stability_margin,
    threshold_fixings,
)
from . import _epivax


def analyze(graph, delta=0.1):
    return _json.loads(_epivax._analyze(graph, delta))


def allocate_json(instance, mode, tol=1e-6, max_cuts=500):
    """Result document as written by `epivax allocate`."""
    return _json.loads(_epivax._allocate(instance, mode, tol, max_cuts))


def certify_json(instance, allocation=None, iterations=2000):
    """Certificate document as written by `epivax certify`."""
    text = None if allocation is None else _json.dumps(allocation)
    return _json.loads(_epivax._certify(instance, text, iterations))
