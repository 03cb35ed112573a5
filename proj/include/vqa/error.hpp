#pragma once

#include <stdexcept>
#include <string>

namespace vqa {

/// Root of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction of a term, atom, rule or program.
class LogicError : public Error {
public:
    using Error::Error;
};

class SubstitutionConflict : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnencodableProgram : public Error {
public:
    using Error::Error;
};

class MalformedScene : public Error {
public:
    using Error::Error;
};

class UnknownPredicate : public Error {
public:
    using Error::Error;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class MalformedProgram : public Error {
public:
    using Error::Error;
};

/// Failure while evaluating a rule program against a fact base.
class EvalError : public Error {
public:
    using Error::Error;
};

class NonGroundBuiltin : public EvalError {
public:
    using EvalError::EvalError;
};

class UnknownObject : public EvalError {
public:
    using EvalError::EvalError;
};

/// A functional program whose execution is undefined on a scene
/// (e.g. `unique` over a set that is not a singleton).
class InvalidExecution : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace vqa
