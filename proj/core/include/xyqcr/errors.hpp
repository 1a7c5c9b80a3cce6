#pragma once

#include <stdexcept>
#include <string>

namespace xyqcr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bogoliubov block has a closing gap (Lambda < 1e-12); caller must take the limit branch.
struct DegenerateBlock : Error {
  using Error::Error;
};

struct NegativeTemperature : Error {
  using Error::Error;
};

// A reduced density matrix failed positivity beyond tolerance; signals a convention bug.
struct InvalidState : Error {
  using Error::Error;
};

struct NotPositive : Error {
  using Error::Error;
};

// Coarse time scan found no response above 1e-14 (degenerate quench h1 == h0).
struct FlatResponse : Error {
  using Error::Error;
};

struct ZeroDenominator : Error {
  using Error::Error;
};

struct TooLarge : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// NaN/Inf reached an output path; aborts the run (CLI exit code 3).
struct NumericalAbort : Error {
  using Error::Error;
};

}  // namespace xyqcr
