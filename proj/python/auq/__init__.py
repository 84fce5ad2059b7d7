"""Aleatoric/epistemic uncertainty toolkit.

Thin Python layer over the native core. Distributions are plain lists of
probabilities; all values are in nats.
"""

import json as _json

from ._auq import (  # noqa: F401
    DegenerateInputError,
    DomainError,
    Error,
    IoError,
    SupportError,
    UnavailableError,
    ValidationError,
    align,
    alpha_delta,
    aucroc,
    binary_entropy,
    concordance,
    cross_entropy,
    decompose,
    digamma,
    entropy,
    eu_lower_bound,
    expected_aleatoric,
    expected_epistemic,
    gamma_delta,
    h_max,
    js_divergence,
    kl,
    mutual_information,
    normalize,
    run_cli,
    semantic_entropy,
    stem,
    thm2_probability_bound,
)
from ._auq import _simulate_json


def simulate(**config):
    """Runs a simplex experiment and returns the verification report as a dict.

    Keyword arguments mirror the CLI config file: k, n, seed, regime
    ("zero-AU", "free-AU", "high-AU"), noise, deltas, ensemble, ensemble_size.
    """
    return _json.loads(_simulate_json(_json.dumps(config)))
