# Copyright 2026 The Floquet Lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the floquet simulator core."""

from ._floquet_lab import (
    ConfigError,
    DisorderRealization,
    FloquetConfig,
    InteractionKind,
    ReadoutCalibration,
    ResourceLimitError,
    apply_confusion,
    cmd_evolve,
    cmd_sweep,
    correct_distribution,
    derive_seed,
    extract_lifetime,
    magnitude_spectrum,
    parse_run_config_text,
    period_unitary,
    run_stroboscopic,
    spin_glass_order,
    verify_flip_elimination,
)

__all__ = [
    "ConfigError",
    "DisorderRealization",
    "FloquetConfig",
    "InteractionKind",
    "ReadoutCalibration",
    "ResourceLimitError",
    "apply_confusion",
    "cmd_evolve",
    "cmd_sweep",
    "correct_distribution",
    "derive_seed",
    "extract_lifetime",
    "magnitude_spectrum",
    "parse_run_config_text",
    "period_unitary",
    "run_stroboscopic",
    "spin_glass_order",
    "verify_flip_elimination",
]
