#pragma once

// Text and CSV rendering of harness reports, and atomic artifact writes.
// All numbers go through fixed snprintf formats, so output is byte-stable.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "torpdo/error.hpp"
#include "torpdo/harness.hpp"

namespace torpdo {

class io_error : public error {
public:
    using error::error;
};

namespace detail {

inline std::string fixed(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

} // namespace detail

inline const char* theorem_csv_header = "theorem,N,r,s,p,q,rho,hypothesis_ok,max_ratio,stability_ok";

/// One CSV row per resolution, after the header.
inline std::string render_csv(const TheoremReport& rep)
{
    using detail::fixed;
    std::string out = std::string(theorem_csv_header) + "\n";
    const auto& t = rep.params;
    for (const auto& row : rep.rows) {
        out += std::string(to_string(rep.id)) + "," + std::to_string(row.n) + "," + fixed(t.r) + "," + fixed(t.s) + ","
               + fixed(t.p) + "," + fixed(t.q) + "," + fixed(t.rho) + "," + detail::yes_no(rep.hypotheses.ok) + ","
               + fixed(row.max_ratio) + "," + detail::yes_no(row.stability_ok) + "\n";
    }
    return out;
}

inline std::string render_text(const TheoremReport& rep)
{
    using detail::fixed;
    const auto& t = rep.params;
    std::string out;
    out += "theorem: " + std::string(to_string(rep.id)) + "\n";
    out += "symbol: " + rep.symbol + "\n";
    out += "parameters: r = " + fixed(t.r) + ", s = " + fixed(t.s) + ", p = " + fixed(t.p) + ", q = " + fixed(t.q)
           + ", rho = " + fixed(t.rho);
    if (rep.id == TheoremId::trie2 || rep.id == TheoremId::HTC)
        out += ", alpha = " + fixed(t.alpha);
    out += "\n";
    out += "experiment: " + rep.source_label + " -> " + rep.target_label + "\n";
    out += "hypotheses:\n";
    for (const auto& h : rep.hypotheses.checks)
        out += std::string("  [") + (h.holds ? "holds" : "FAILS") + "] " + h.text
               + (h.informational ? " (recorded only)" : "") + "\n";
    out += std::string("hypotheses satisfied: ") + detail::yes_no(rep.hypotheses.ok) + "\n";
    for (const auto& n : rep.hypotheses.notes)
        out += "note: " + n + "\n";
    const auto& cs = rep.class_spec;
    out += "class condition: |Delta^a d_x^b sigma| <= C " + std::string(cs.weight == WeightMode::bracket ? "<xi>" : "|xi|")
           + "^(" + fixed(cs.m) + " - " + fixed(cs.rho) + " a + " + fixed(cs.delta) + " b), a <= "
           + std::to_string(cs.alpha_max) + ", b <= " + std::to_string(cs.beta_max) + "\n";
    for (const auto& c : rep.class_constants)
        out += "  C[" + std::to_string(c.alpha) + "][" + std::to_string(c.beta) + "] = " + fixed(c.value) + "\n";
    out += "probes: " + std::to_string(rep.options.lacunary_count) + " lacunary + "
           + std::to_string(rep.options.random_count) + " random (decay " + fixed(rep.options.random_decay)
           + "), seed " + std::to_string(rep.options.seed) + "\n";
    out += "growth factor per doubling: " + fixed(rep.options.growth_factor) + "\n";
    out += "resolutions:\n";
    for (const auto& row : rep.rows) {
        out += "  N = " + std::to_string(row.n) + ": max ratio " + fixed(row.max_ratio);
        if (row.frozen_max_ratio >= 0.0)
            out += ", frozen max ratio " + fixed(row.frozen_max_ratio);
        out += ", blocks 0.." + std::to_string(row.max_block);
        if (row.subsampled)
            out += ", hoelder shifts subsampled";
        out += std::string(", stability ") + (row.stability_ok ? "ok" : "FAILS") + "\n";
    }
    out += "verdict: " + std::string(to_string(rep.verdict)) + "\n";
    return out;
}

inline std::string render_text(const InequalityReport& rep)
{
    std::string out = "inequality: " + rep.name + "\n" + rep.statement + "\n";
    for (const auto& row : rep.rows)
        out += "  N = " + std::to_string(row.n) + ": empirical constant " + detail::fixed(row.constant)
               + (row.stability_ok ? "" : " (growth above threshold)") + "\n";
    out += std::string("stable: ") + detail::yes_no(rep.stable) + "\n";
    return out;
}

inline std::string render_text(const std::vector<ChordBlock>& blocks)
{
    std::string out = "inequality: chord-bound\n|e^{-i xi h} - 1| >= sqrt(3) for 2^m <= |xi| <= 2^{m+1}, h = 2 pi / (3 2^m)\n";
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "  m = %d: h = %.12g, min chord %.17g at xi = %d\n", b.m, b.h, b.min_chord,
                      b.argmin);
        out += buf;
        worst = std::min(worst, b.min_chord);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "minimum: %.17g (sqrt(3) = %.17g)\n", worst, std::sqrt(3.0));
    out += buf;
    return out;
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw io_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw io_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            os.close();
            fs::remove(tmp, ec);
            throw io_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

} // namespace torpdo
