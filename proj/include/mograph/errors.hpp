#pragma once

#include <stdexcept>
#include <string>

namespace mograph {

// Base for everything thrown by the library. Subclasses mirror the failure
// categories the CLI maps to exit codes (validation vs pipeline). The
// pipeline runner annotates in-flight errors with the stage that raised
// them without losing the concrete type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}

    void set_stage(const std::string& stage) {
        if (!stage_.empty()) return;
        stage_ = stage;
        annotated_ = "[" + stage_ + "] " + std::runtime_error::what();
    }
    const std::string& stage() const { return stage_; }
    const char* what() const noexcept override {
        return annotated_.empty() ? std::runtime_error::what() : annotated_.c_str();
    }

private:
    std::string stage_;
    std::string annotated_;
};

#define MOGRAPH_DEFINE_ERROR(NAME)                                  \
    class NAME : public Error {                                     \
    public:                                                         \
        explicit NAME(const std::string& msg) : Error(msg) {}       \
    }

// Input / configuration problems (CLI exit code 2).
MOGRAPH_DEFINE_ERROR(ParseError);
MOGRAPH_DEFINE_ERROR(SchemaError);
MOGRAPH_DEFINE_ERROR(ValueError);
MOGRAPH_DEFINE_ERROR(FormatError);
MOGRAPH_DEFINE_ERROR(IoError);
MOGRAPH_DEFINE_ERROR(VersionError);
MOGRAPH_DEFINE_ERROR(UnknownTagError);

// Runtime / pipeline problems (CLI exit code 3).
MOGRAPH_DEFINE_ERROR(IndexError);
MOGRAPH_DEFINE_ERROR(SkeletonMismatchError);
MOGRAPH_DEFINE_ERROR(EmptyGraphError);
MOGRAPH_DEFINE_ERROR(EmptyCandidateError);
MOGRAPH_DEFINE_ERROR(TooLargeError);
MOGRAPH_DEFINE_ERROR(LengthMismatchError);
MOGRAPH_DEFINE_ERROR(SpanError);
MOGRAPH_DEFINE_ERROR(PathGraphMismatchError);

#undef MOGRAPH_DEFINE_ERROR

inline bool is_validation_error(const Error& e) {
    return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
           dynamic_cast<const ValueError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
           dynamic_cast<const IoError*>(&e) || dynamic_cast<const VersionError*>(&e) ||
           dynamic_cast<const UnknownTagError*>(&e);
}

}  // namespace mograph
