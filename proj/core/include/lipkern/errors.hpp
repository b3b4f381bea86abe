/*
 * Copyright 2026 The lipkern authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIPKERN_ERRORS_HPP
#define LIPKERN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lipkern {

/// Base class for all lipkern errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A solve was requested on a matrix that is numerically singular.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue(min_eigenvalue) {}
    double min_eigenvalue;
};

/// A matrix expected to be positive semidefinite has an eigenvalue below tolerance.
class NotPsdError : public Error {
public:
    NotPsdError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue(eigenvalue) {}
    double eigenvalue;
};

/// An iteration failed to converge within its budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, long iterations)
        : Error(what), residual(residual), iterations(iterations) {}
    double residual;
    long iterations;
};

} // namespace lipkern

#endif // LIPKERN_ERRORS_HPP
