"""Verification engine for hamiltonian Lie algebroids."""

import json

from ._forge import (
    CatalogError,
    ModelError,
    SamplingExhausted,
    SynthesisError,
    UnknownCheck,
    catalog_names,
    check_names,
)
from . import _forge

__all__ = [
    "CatalogError",
    "ModelError",
    "SamplingExhausted",
    "SynthesisError",
    "UnknownCheck",
    "catalog_model",
    "catalog_names",
    "catalog_run",
    "check",
    "check_names",
    "synthesize",
]


def _text(model):
    return model if isinstance(model, str) else json.dumps(model)


def check(model, checks=(), samples=None, seed=None, tol=None):
    """Run checks on a model (dict or JSON text) and return the report as a dict."""
    return json.loads(_forge.check(_text(model), list(checks), samples, seed, tol))


def catalog_model(name):
    return json.loads(_forge.catalog_model(name))


def catalog_run(names=()):
    return json.loads(_forge.catalog_run(list(names)))


def synthesize(model, vref):
    """Tangent-algebroid model with the synthesized connection for the given reference field."""
    return json.loads(_forge.synthesize(_text(model), [str(v) for v in vref]))
