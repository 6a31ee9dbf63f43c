# Copyright 2026 The iotledger Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Ledger construction, obfuscation and device-classification attacks."""

import json

from . import _iotledger
from ._iotledger import (
    Error,
    LedgerSet,
    ParseError,
    StageError,
    Trace,
    build_baseline,
    parse_csv,
)

__all__ = [
    "Error",
    "LedgerSet",
    "ParseError",
    "StageError",
    "Trace",
    "blind_attack",
    "build_baseline",
    "builtin_profiles",
    "compose",
    "informed_attack",
    "parse_csv",
    "run",
    "sweep",
    "synth_trace",
]


def builtin_profiles():
    return json.loads(_iotledger.builtin_profiles_json())


def synth_trace(duration, seed, profiles=None, jitter=None):
    text = None if profiles is None else json.dumps(profiles)
    return _iotledger.synth_trace(duration, seed, text, jitter)


def compose(trace, pipeline):
    """Builds ledgers through `pipeline`: [{"transform": name, "params": {...}}]."""
    return _iotledger.compose(trace, json.dumps(pipeline))


def informed_attack(ledgers, **kwargs):
    return json.loads(_iotledger.informed_attack(ledgers, **kwargs))


def blind_attack(train, test, **kwargs):
    return json.loads(_iotledger.blind_attack(train, test, **kwargs))


def run(config):
    return json.loads(_iotledger.run(json.dumps(config)))


def sweep(config, axis, values=None):
    return json.loads(_iotledger.sweep(json.dumps(config), axis, values))
