// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_RESULT_HPP
#define WSNEMU_RESULT_HPP

#include <utility>
#include <variant>

namespace wsnemu {

/// Value-or-error return type for codec paths, where failures are ordinary
/// classified outcomes rather than exceptional conditions.
template <typename T, typename E>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(E error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() { return std::get<T>(v_); }
    const T& value() const { return std::get<T>(v_); }
    E error() const { return std::get<E>(v_); }

    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> v_;
};

} // namespace wsnemu

#endif
