#pragma once

#include <string>
#include <variant>

#include "pingcert/growth.hpp"
#include "pingcert/pingpong.hpp"

namespace pingcert {

// Generating-set files: {"dim": d, "generators": [rows of "p/q" strings], "flags": {...}}.
// Optional flags ("symmetric", "contains_identity") must agree with the
// exact computation. Throws InvalidInput on any malformed or inconsistent input.
GeneratorSetPtr parse_generators(const std::string& text);
std::string generators_json(const GeneratorSet& s);

inline constexpr int kCertificateVersion = 1;

using AnyCertificate = std::variant<SemigroupCertificate, FreeGroupCertificate>;

// Versioned, exact serialization: parse then dump reproduces the same bytes.
std::string certificate_json(const SemigroupCertificate& c);
std::string certificate_json(const FreeGroupCertificate& c);
std::string certificate_json(const AnyCertificate& c);
AnyCertificate parse_certificate(const std::string& text);

std::string growth_report_json(const GrowthReport& r);
std::string bound_chain_json(const BoundChain& b);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pingcert
