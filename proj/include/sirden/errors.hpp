#pragma once

#include <stdexcept>
#include <string>

namespace sirden {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File missing, unreadable, or unwritable.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Decodable file but unsupported layout (alpha channel, palette, ...).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Two images or tensors that must agree in shape do not.
class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

// NaN or Inf appeared where only finite values are valid.
class NonFiniteOutput : public Error {
 public:
  explicit NonFiniteOutput(const std::string& msg) : Error(msg) {}
};

// Image smaller than the estimator's patch size.
class ImageTooSmall : public Error {
 public:
  explicit ImageTooSmall(const std::string& msg) : Error(msg) {}
};

// Layer or neuron index outside the network.
class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};

}  // namespace sirden
