# Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Contrastive stepwise proof generation toolkit (core bindings)."""

from ._condec import (
    CondecError,
    batch_loss,
    bm25_rank,
    canonical_proof,
    contrastive_loss,
    evaluate,
    grad_check,
    parse_proof,
    validate_tree,
    vanilla_negative,
)

__version__ = "0.1.0"

__all__ = [
    "CondecError",
    "batch_loss",
    "bm25_rank",
    "canonical_proof",
    "contrastive_loss",
    "evaluate",
    "grad_check",
    "parse_proof",
    "validate_tree",
    "vanilla_negative",
]
