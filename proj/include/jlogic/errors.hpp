/*
 * Copyright (c) The jlogic Authors.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jlogic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Malformed instance files and similar input problems.
class FormatError : public Error {
public:
    using Error::Error;
};

class ImproperDescription : public Error {
public:
    using Error::Error;
};

class NotInjectiveOnSupport : public Error {
public:
    using Error::Error;
};

class IllegalSugar : public Error {
public:
    using Error::Error;
};

/// A static check (safety, stratification, vocabulary) rejected a program.
class StaticError : public Error {
public:
    using Error::Error;
};

class NotStratifiable : public StaticError {
public:
    using StaticError::StaticError;
};

class VocabMismatch : public StaticError {
public:
    using StaticError::StaticError;
};

class CyclicEquality : public Error {
public:
    using Error::Error;
};

enum class LimitKind { DerivedFacts, PathLength, PackDepth };

const char* to_string(LimitKind kind);

class LimitExceeded : public Error {
public:
    explicit LimitExceeded(LimitKind kind)
        : Error(std::string("evaluation limit exceeded: ") + to_string(kind)), kind_(kind)
    {
    }
    LimitKind kind() const { return kind_; }

private:
    LimitKind kind_;
};

} // namespace jlogic
