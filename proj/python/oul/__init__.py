# Copyright 2026 The oul Authors. All rights reserved.
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

"""Universal online learning toolkit."""

from oul._oul import (
    ConceptClass,
    ConfigError,
    DomainError,
    InfeasibleError,
    InvariantViolation,
    NumericError,
    OulError,
    RealizabilityError,
    SizeError,
    StateError,
    check_c2,
    check_condition1,
    full,
    index_of_set,
    is_realizable,
    littlestone_dimension,
    load_class,
    parse_class,
    restrict,
    run_trial,
    set_of_index,
    shatters,
    singletons,
    thresholds,
    two_expert_benchmark,
    union_split,
    vc_dimension,
    vcl_depth,
    weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
