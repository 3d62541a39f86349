//
// Project molxfer - Copyright 2026 The molxfer Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLXFER_ERROR_H_
#define MOLXFER_ERROR_H_

#include <stdexcept>
#include <string>

namespace molxfer {

// Root of every exception thrown by the library.
class Error: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised by shape checks across the numeric modules.
class ShapeError: public Error {
public:
  using Error::Error;
};

}  // namespace molxfer

#endif  // MOLXFER_ERROR_H_
