#pragma once

#include <stdexcept>
#include <string>

namespace tvplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridError : Error {
  using Error::Error;
};

// Raised whenever two masks that must share a grid do not.
struct GridMismatchError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct MarginError : Error {
  using Error::Error;
};

struct MetricError : Error {
  using Error::Error;
};

struct NrrdError : Error {
  using Error::Error;
};

struct ProviderError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct PhantomError : Error {
  using Error::Error;
};

struct BackendError : Error {
  using Error::Error;
};

}  // namespace tvplan
