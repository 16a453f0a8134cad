# SPDX-License-Identifier: Apache-2.0
#
# xlma: placement optimization and simulation for movable-subarray uplinks
# Copyright (C) 2026 The xlma authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Placement of movable subarrays for uplink multiuser coverage."""

import json
import os

from . import _core
from ._core import ConfigError, DomainError, fejer_correlation, solve_lp

__all__ = [
    "ConfigError",
    "DomainError",
    "fejer_correlation",
    "load",
    "plan",
    "render_map",
    "solve_lp",
    "sweep",
    "validate",
    "weighted_sum_rate",
]


def _text(doc):
    if isinstance(doc, (str, os.PathLike)):
        with open(doc, encoding="utf-8") as fh:
            return fh.read()
    return json.dumps(doc)


def load(path):
    """Read a JSON document (scenario, sweep or map spec) into a dict."""
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def plan(config, threads=0):
    """Run the placement optimizer; returns the plan document as a dict."""
    return json.loads(_core.plan(_text(config), threads))


def weighted_sum_rate(config, sites, threads=0):
    """Closed-form MRC weighted sum rate and its upper bound for candidate sites."""
    return _core.weighted_sum_rate(_text(config), list(sites), threads)


def sweep(config, spec, threads=0):
    """One dict per (value, scheme, evaluator) row."""
    return _core.sweep(_text(config), _text(spec), threads)


def validate(config, threads=0, corrupt_kernels=False):
    """List of (check, passed, detail)."""
    return _core.validate(_text(config), threads, corrupt_kernels)


def render_map(config, spec, threads=0):
    """Power (dB) or correlation map; values is a rows x cols array."""
    return _core.render_map(_text(config), _text(spec), threads)
