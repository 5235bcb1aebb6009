#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sitekit {

/// Raised for malformed input: dangling identifiers, non-total tables,
/// unresolved references. Distinct from law failures, which are reported
/// through VerificationReport.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a precondition of an operation does not hold
/// (e.g. a fibre without a terminal object).
class PreconditionError : public InputError {
public:
    explicit PreconditionError(const std::string& what) : InputError(what) {}
};

/// Raised when an exhaustive enumeration would exceed a size guard.
/// Carries the guard name so reports can point at the limit that fired.
class GuardError : public std::runtime_error {
public:
    GuardError(std::string guard, const std::string& what)
        : std::runtime_error(what), guard_(std::move(guard)) {}
    const std::string& guard() const { return guard_; }

private:
    std::string guard_;
};

enum class Status {
    Pass,
    Fail,
    Inconclusive,  // guard exceeded, no verdict
    Sampled,       // passed on a sampled sub-space only
    Skipped,       // hypotheses of a conditional check not met
};

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
        case Status::Sampled: return "sampled";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

/// A concrete counterexample: ordered key/value pairs naming the offending
/// objects, arrows, sieves or lattice elements.
struct Witness {
    std::vector<std::pair<std::string, std::string>> fields;

    Witness& with(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
        return *this;
    }
};

struct CheckResult {
    std::string name;  // stable machine name, e.g. "relative-bc"
    std::string law;   // the condition it verifies, in words
    Status status = Status::Pass;
    std::vector<Witness> witnesses;
    std::string note;

    bool passed() const { return status == Status::Pass || status == Status::Sampled; }
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    CheckResult& add(std::string name, std::string law, Status status = Status::Pass) {
        checks.push_back(CheckResult{std::move(name), std::move(law), status, {}, ""});
        return checks.back();
    }

    void merge(const VerificationReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    bool ok() const {
        for (const auto& c : checks)
            if (c.status == Status::Fail) return false;
        return true;
    }

    bool exhaustive() const {
        for (const auto& c : checks)
            if (c.status == Status::Sampled || c.status == Status::Inconclusive) return false;
        return true;
    }
};

}  // namespace sitekit
