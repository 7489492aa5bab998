// Copyright 2026 The archlog Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

namespace archlog {

/// Parse failure with the byte offset where scanning stopped.
struct ParseError {
    std::size_t offset = 0;
    std::string reason;
};

/// Minimal value-or-error carrier. Parsing is total: callers always get
/// either a value or a ParseError, never an exception.
template <typename T>
class Result {
public:
    Result(T value) : value_(std::move(value)) {}
    Result(ParseError error) : error_(std::move(error)) {}

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    T &operator*() { return *value_; }
    const T &operator*() const { return *value_; }
    T *operator->() { return &*value_; }
    const T *operator->() const { return &*value_; }

    T &value() { return *value_; }
    const T &value() const { return *value_; }
    const ParseError &error() const { return error_; }

private:
    std::optional<T> value_;
    ParseError error_;
};

} // namespace archlog
