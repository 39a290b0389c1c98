#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dqg {

enum class Verdict { Pass, Fail, Info, Skipped };

const char* verdict_name(Verdict v);

struct Check {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    Verdict verdict = Verdict::Info;
    std::string window;
    std::string note;
};

struct Report {
    std::string title;
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }
    void pass_fail(const std::string& name, double residual, double tol,
                   const std::string& window = "", const std::string& note = "");
    void info(const std::string& name, double value, const std::string& note = "");
    void skipped(const std::string& name, const std::string& note);
    void merge(const Report& other);

    bool passed() const;
    const Check* find(const std::string& name) const;
};

// Worst residual over a batch of samples; uncertified samples are counted.
class Probe {
public:
    Probe(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

    void observe(double residual);
    void skip(const std::string& why);
    int samples() const { return samples_; }
    double worst() const { return worst_; }
    Check finish(const std::string& window = "") const;

private:
    std::string name_;
    double tol_;
    double worst_ = 0.0;
    int samples_ = 0;
    int skipped_ = 0;
    std::string first_skip_;
};

std::string format_text(const Report& r);
// One tab-separated record per line, fixed field order:
// check <name> <verdict> <residual> <tol> <window> <note>
std::string format_machine(const Report& r);

}  // namespace dqg
