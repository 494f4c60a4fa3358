#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "maxstab/markov.hpp"
#include "maxstab/monte_carlo.hpp"
#include "maxstab/stochastic.hpp"

namespace maxstab {

/// A jump system together with its mode chain, as stored on disk.
struct SystemFile {
    JumpLinearSystem system;
    MarkovChain chain;
};

/// System file format (JSON):
///   { "algebra": "max-plus" | "max-product", "n": int, "modes": int,
///     "A": [matrix per mode], "B": optional, "C": optional,
///     "chain": modes x modes matrix }
/// Matrix entries are numbers; the strings "inf" and "-inf" denote the
/// infinities. "chain" may be omitted for single-mode systems.
/// Throws ParseError carrying file, line and field context.
SystemFile load_system_file(const std::filesystem::path& path);
SystemFile parse_system_text(const std::string& text, const std::string& origin);
std::string system_to_text(const JumpLinearSystem& sys, const MarkovChain& chain);
void save_system_file(const std::filesystem::path& path, const JumpLinearSystem& sys,
                      const MarkovChain& chain);

/// Certificate file format (JSON):
///   { "k0": int, "delta": [per-mode], "p": [vector per mode],
///     "gamma": optional number }
/// "delta" may be absent on input (a verifier fills it in); "gamma"
/// records the transform used when the certified system was max-plus.
struct CertificateFile {
    Certificate certificate;
    std::optional<double> gamma;
};

CertificateFile load_certificate_file(const std::filesystem::path& path);
CertificateFile parse_certificate_text(const std::string& text, const std::string& origin);
std::string certificate_to_text(const Certificate& cert,
                                std::optional<double> gamma = std::nullopt);
void save_certificate_file(const std::filesystem::path& path, const Certificate& cert,
                           std::optional<double> gamma = std::nullopt);

/// CSV with columns k, mode, x_1..x_n, then u_* and z_* when present.
/// Values print with full round-trip precision; infinities as "inf"/"-inf".
void write_trace_csv(std::ostream& os, const Trace& trace);
std::string trace_to_csv(const Trace& trace);

}  // namespace maxstab
