// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rffsim
{
//! Failure classes; values double as CLI exit codes.
enum class ErrorKind : int
{
    config = 1,
    solver = 2,
    runtime = 3,
};

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, std::string const& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

//! Invalid specification or configuration (raised at construction time).
class ConfigError : public Error
{
  public:
    explicit ConfigError(std::string const& what)
        : Error(ErrorKind::config, what)
    {
    }
};

//! No (T, p) pair satisfies the tolerances on the requested grid.
class SolverError : public Error
{
  public:
    explicit SolverError(std::string const& what)
        : Error(ErrorKind::solver, what)
    {
    }
};

//! IO failures, degenerate fits and other runtime problems.
class RuntimeError : public Error
{
  public:
    explicit RuntimeError(std::string const& what)
        : Error(ErrorKind::runtime, what)
    {
    }
};

}  // namespace rffsim
