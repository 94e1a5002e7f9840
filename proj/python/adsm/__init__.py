"""Bibliographic query language and citation metrics."""

import json

from ._core import DEFAULT_CAP, AdsmError, Engine, explain, grammar_help, parse

__all__ = ["DEFAULT_CAP", "AdsmError", "Engine", "explain", "grammar_help", "parse", "metrics_dict"]


def metrics_dict(engine, **kwargs):
    """Metrics overview as a dict (JSON format)."""
    kwargs["format"] = "json"
    return json.loads(engine.metrics(**kwargs))
