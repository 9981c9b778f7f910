/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cranhl/error.hpp"

namespace cranhl::nn {

using Shape = std::vector<std::size_t>;

// Dense double-precision array with shared storage. Gradients live next to
// the values so backward closures can accumulate into them; `needs_grad`
// marks tensors that participate in differentiation (parameters and
// anything computed from them).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor scalar(double value);
  static Tensor zeros_like(const Tensor& other);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t dim(std::size_t i) const { return impl_->shape[i]; }
  std::size_t size() const { return impl_->values.size(); }

  double* data() { return impl_->values.data(); }
  const double* data() const { return impl_->values.data(); }
  std::span<const double> values() const { return impl_->values; }
  std::span<double> values_mut() { return impl_->values; }

  double& operator[](std::size_t i) { return impl_->values[i]; }
  double operator[](std::size_t i) const { return impl_->values[i]; }
  double& at(std::size_t r, std::size_t c) {
    return impl_->values[r * impl_->shape[1] + c];
  }
  double at(std::size_t r, std::size_t c) const {
    return impl_->values[r * impl_->shape[1] + c];
  }
  double item() const;

  bool needs_grad() const { return impl_ && impl_->needs_grad; }
  Tensor& set_needs_grad(bool v) {
    impl_->needs_grad = v;
    return *this;
  }

  // Gradient buffer, zero-initialized on first touch.
  std::vector<double>& grad();
  bool has_grad() const { return impl_ && !impl_->grad.empty(); }
  void zero_grad();
  void drop_grad();

  // Shares storage; shape must cover the same element count.
  Tensor reshaped(Shape shape) const;

  Tensor clone() const;

  // Throws ContractViolation when any value is NaN/Inf.
  void check_finite(const char* where) const;

  bool same_storage(const Tensor& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;  // empty until needed
    bool needs_grad = false;
  };
  std::shared_ptr<Impl> impl_;
};

std::string shape_str(const Shape& s);
std::size_t shape_count(const Shape& s);

}  // namespace cranhl::nn
