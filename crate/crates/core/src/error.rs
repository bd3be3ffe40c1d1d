// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use thiserror::Error;

/// Errors raised while reading or constructing graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: vertex {vertex} is out of range for a graph with {n} vertices")]
    HeaderRange { line: usize, vertex: usize, n: usize },
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("infeasible generator parameters: {0}")]
    Construction(String),
}

/// Errors raised by the algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("edge-query budget of {cap} exhausted")]
    BudgetExhausted { cap: u64 },
    #[error("query index {index} is out of range for vertex {vertex}")]
    IndexOutOfRange { vertex: usize, index: usize },
    #[error("vertex {0} is not in the search tree")]
    NotInTree(usize),
    #[error("projected separation triple has an empty side")]
    ProjectionDegenerate,
    #[error("vertex {0} has out-degree zero")]
    ZeroOutDegree(usize),
    #[error("witness failed validation: {0}")]
    InvalidWitness(String),
    #[error("input exceeds oracle limits: {0}")]
    LimitExceeded(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
