#include "dqg/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dqg {

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Info: return "INFO";
    case Verdict::Skipped: return "SKIP";
    }
    return "?";
}

void Report::pass_fail(const std::string& name, double residual, double tol,
                       const std::string& window, const std::string& note)
{
    const bool ok = std::isfinite(residual) && residual <= tol;
    add({name, residual, tol, ok ? Verdict::Pass : Verdict::Fail, window, note});
}

void Report::info(const std::string& name, double value, const std::string& note)
{
    add({name, value, 0.0, Verdict::Info, "", note});
}

void Report::skipped(const std::string& name, const std::string& note)
{
    add({name, 0.0, 0.0, Verdict::Skipped, "", note});
}

void Report::merge(const Report& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::passed() const
{
    for (const auto& c : checks)
        if (c.verdict == Verdict::Fail) return false;
    return true;
}

const Check* Report::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void Probe::observe(double residual)
{
    ++samples_;
    if (std::isnan(worst_)) return;
    if (std::isnan(residual) || residual > worst_) worst_ = residual;
}

void Probe::skip(const std::string& why)
{
    if (skipped_++ == 0) first_skip_ = why;
}

Check Probe::finish(const std::string& window) const
{
    Check c{name_, worst_, tol_, Verdict::Pass, window, ""};
    if (samples_ == 0) {
        c.verdict = Verdict::Skipped;
        c.note = skipped_ ? "no certified samples; " + first_skip_ : "no samples";
        return c;
    }
    c.verdict = (std::isfinite(worst_) && worst_ <= tol_) ? Verdict::Pass : Verdict::Fail;
    c.note = std::to_string(samples_) + " samples";
    if (skipped_) c.note += ", " + std::to_string(skipped_) + " uncertified skipped";
    return c;
}

namespace {

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

}  // namespace

std::string format_text(const Report& r)
{
    std::ostringstream os;
    os << "== " << r.title << " ==\n";
    for (const auto& [k, v] : r.header) os << "  " << k << ": " << v << "\n";
    std::size_t width = 8;
    for (const auto& c : r.checks) width = std::max(width, c.name.size());
    for (const auto& c : r.checks) {
        os << "  [" << verdict_name(c.verdict) << "] " << c.name << std::string(width - c.name.size() + 2, ' ');
        if (c.verdict == Verdict::Info)
            os << "value=" << sci(c.residual);
        else if (c.verdict != Verdict::Skipped)
            os << "residual=" << sci(c.residual) << " tol=" << sci(c.tol);
        if (!c.window.empty()) os << " window=" << c.window;
        if (!c.note.empty()) os << " (" << c.note << ")";
        os << "\n";
    }
    os << "  result: " << (r.passed() ? "all checks passed" : "FAILED") << "\n";
    return os.str();
}

std::string format_machine(const Report& r)
{
    std::ostringstream os;
    os << "report\t" << r.title << "\n";
    for (const auto& [k, v] : r.header) os << "header\t" << k << "\t" << v << "\n";
    for (const auto& c : r.checks)
        os << "check\t" << c.name << "\t" << verdict_name(c.verdict) << "\t" << sci(c.residual) << "\t"
           << sci(c.tol) << "\t" << c.window << "\t" << c.note << "\n";
    os << "result\t" << (r.passed() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace dqg
