#pragma once

#include <stdexcept>
#include <string>

namespace roso {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public Error { using Error::Error; };        // malformed data/config files
class GenerationError : public Error { using Error::Error; };
class ScoringError : public Error { using Error::Error; };
class BuildError : public Error { using Error::Error; };
class InferenceError : public Error { using Error::Error; };
class NoDetection : public Error { using Error::Error; };
class EditError : public Error { using Error::Error; };
class LookupError : public Error { using Error::Error; };
class EncodingError : public Error { using Error::Error; };
class MetricError : public Error { using Error::Error; };
class IntegrityError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

} // namespace roso
