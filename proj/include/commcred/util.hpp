#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace commcred {

// Input/usage problems (missing files, bad arguments, malformed config).
// The CLI maps these to exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariants. The CLI maps these to exit code 3.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

// ---- hashing / seeding ------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

// Derive an independent stream seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_init();
std::uint64_t fnv1a64_step(std::uint64_t state, std::string_view bytes);

std::string hex64(std::uint64_t v);

// FNV-1a digest of a file's bytes, as 16 hex chars. Throws UsageError if unreadable.
std::string file_digest(const std::filesystem::path& p);

// ---- deterministic randomness -----------------------------------------
// std::uniform_int_distribution and std::shuffle are implementation-defined;
// these helpers pin the exact sequence so outputs are portable.

using Rng = std::mt19937_64;

// Uniform integer in [0, bound), bound > 0.
std::uint64_t bounded_rand(Rng& rng, std::uint64_t bound);

// Uniform double in [0, 1).
double unit_rand(Rng& rng);

template <typename T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded_rand(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// ---- text helpers ------------------------------------------------------

// Classifier tokenization: lowercase, split on non-alphanumeric runs,
// drop single-character tokens. ASCII alphanumerics only; anything else
// is a separator.
std::vector<std::string> tokenize(std::string_view text);

// Remove <...> tag runs from HTML-ish text, collapsing each tag to a space.
std::string strip_html(std::string_view html);

// Number of whitespace-separated tokens.
std::size_t whitespace_token_count(std::string_view text);

std::string to_lower(std::string_view s);

// Shortest round-trip decimal formatting for doubles (std::to_chars).
std::string format_double(double v);

double median(std::vector<double> values);  // by value: sorts its copy

// ---- csv ----------------------------------------------------------------

// Parse one CSV record. Supports double-quoted fields with "" escapes.
// Returns nullopt for structurally broken records (unterminated quote).
std::optional<std::vector<std::string>> parse_csv_record(std::string_view line);

// Quote a field if it contains a comma, quote, or newline.
std::string csv_field(std::string_view value);

// ---- files ----------------------------------------------------------------

std::string read_file(const std::filesystem::path& p);  // throws UsageError

// Write via temp file + rename so readers never observe partial content.
void atomic_write_file(const std::filesystem::path& p, std::string_view content);

}  // namespace commcred
