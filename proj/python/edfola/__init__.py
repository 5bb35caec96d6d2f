# Copyright 2026 The edfola Authors
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

"""Online aggregation over evolving data frames."""

import json

from ._core import (
    DomainError,
    EdfError,
    ExecutionError,
    ParseError,
    ValidationError,
    chebyshev_k,
    exact_result,
    fit_growth,
    run_query,
    score_lines,
    solve_distinct,
    write_deepquery,
    write_monomial,
    write_suite,
)

__all__ = [
    "DomainError",
    "EdfError",
    "ExecutionError",
    "ParseError",
    "ValidationError",
    "chebyshev_k",
    "exact",
    "fit_growth",
    "run",
    "score",
    "solve_distinct",
    "write_deepquery",
    "write_monomial",
    "write_suite",
]


def _query_text(query):
    if isinstance(query, dict):
        return json.dumps(query)
    with open(query, encoding="utf-8") as f:
        return f.read()


def run(query, data_dir, seed=None, ci_level=None, sequential=False):
    """Snapshots of `query` (a path or a dict) as a list of dicts."""
    lines = run_query(_query_text(query), str(data_dir), seed, ci_level, sequential)
    return [json.loads(line) for line in lines]


def exact(query, data_dir):
    return json.loads(exact_result(_query_text(query), str(data_dir)))


def score(snapshots, exact_record):
    stream = [json.dumps(s) for s in snapshots]
    return [json.loads(line) for line in score_lines(stream, json.dumps(exact_record))]
