# Copyright 2026 The pixground Authors.
# SPDX-License-Identifier: Apache-2.0
"""Pixel-grounding evaluation core."""

import json as _json
import os as _os

from ._pixground import (  # noqa: F401
    Error,
    FormatError,
    InvalidArgument,
    MaskRLE,
    SchemaError,
    categorize,
    decode,
    encode,
    harmonic_score,
    iou,
    normalize_across_outputs,
    parse_option_letter,
    phrase_location_pct,
    spelling_perturb,
)
from . import _pixground

__version__ = "0.1.0"


def evaluate(benchmark, runs, strategy="oracle", jobs=1, transcript=None):
    """Scores run manifests against a benchmark; returns the report as a dict."""
    runs = [_os.fspath(r) for r in runs]
    t = None if transcript is None else _os.fspath(transcript)
    return _json.loads(
        _pixground.evaluate_json(_os.fspath(benchmark), runs, strategy, jobs, t))
