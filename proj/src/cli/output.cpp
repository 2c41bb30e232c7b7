#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "phasesym/cli.hpp"
#include "phasesym/error.hpp"

namespace phasesym::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0; // drop the sign of -0
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw NumericalError("format_number: conversion failed");
    return std::string(buf, end);
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "time";
    for (const auto& s : t.observables) {
        if (s.complex_valued)
            out << ',' << s.name << "_re," << s.name << "_im";
        else
            out << ',' << s.name;
    }
    out << '\n';
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        out << format_number(t.times[k]);
        for (const auto& s : t.observables) {
            out << ',' << format_number(s.values[k].real());
            if (s.complex_valued) out << ',' << format_number(s.values[k].imag());
        }
        out << '\n';
    }
    return out.str();
}

std::string spectrum_csv(const SpectrumResult& s) {
    std::ostringstream out;
    out << "index,eigenvalue_re,eigenvalue_im\n";
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
        out << k << ',' << format_number(s.eigenvalues[k].real()) << ',' << format_number(s.eigenvalues[k].imag())
            << '\n';
    return out.str();
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream out;
    bool first = true;
    for (const auto& a : r.axes) {
        out << (first ? "" : ",") << a.name;
        first = false;
    }
    for (const auto& v : r.value_names) out << ',' << v;
    out << ",ok\n";
    for (const auto& p : r.points) {
        for (std::size_t i = 0; i < p.coords.size(); ++i) out << (i ? "," : "") << format_number(p.coords[i]);
        for (double v : p.values) out << ',' << format_number(v);
        out << ',' << (p.ok ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string weights_csv(const std::vector<WeightRow>& rows) {
    std::ostringstream out;
    out << "label,multiplicity,weight\n";
    for (const auto& r : rows) out << format_number(r.label) << ',' << r.multiplicity << ',' << format_number(r.weight) << '\n';
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open " + tmp.string() + " for writing");
        f << text;
        if (!f.flush()) throw ValidationError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ValidationError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

} // namespace phasesym::cli
