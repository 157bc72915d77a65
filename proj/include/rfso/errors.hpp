#ifndef RFSO_ERRORS_HPP
#define RFSO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfso {

// Invalid argument / parameter outside the supported domain.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// A series or iteration failed to meet its tolerance within the budget.
// Carries the best value obtained so far.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double partial, double err_estimate)
        : std::runtime_error(what), partial_(partial), err_estimate_(err_estimate) {}
    double partial() const { return partial_; }
    double err_estimate() const { return err_estimate_; }
private:
    double partial_;
    double err_estimate_;
};

} // namespace rfso

#endif
