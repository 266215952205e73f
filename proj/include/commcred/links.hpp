#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "commcred/ingest.hpp"

namespace commcred {

// The four tweet link categories, in precedence order for multi-URL
// tweets: a direct article link beats a general web page beats a social
// post; no-URL tweets stand alone.
enum class LinkCategory : int {
    PubMedDirect = 1,
    WebPage = 2,
    SocialMedia = 3,
    NoUrl = 4,
};

struct ResolverRecord {
    std::string short_url;
    std::string expanded_url;
    bool links_to_pubmed = false;
    bool unknown = false;  // not present in the resolver snapshot
};

// Offline stand-in for URL expansion plus article-linkage lookup.
class Resolver {
public:
    virtual ~Resolver() = default;
    virtual std::optional<ResolverRecord> lookup(const std::string& url) const = 0;
};

// Snapshot loaded from resolver_fixtures.jsonl:
// {"short_url","expanded_url","links_to_pubmed"} per line.
class FixtureResolver : public Resolver {
public:
    static FixtureResolver load(const std::filesystem::path& path);

    void add(ResolverRecord record);
    std::size_t size() const { return map_.size(); }
    std::optional<ResolverRecord> lookup(const std::string& url) const override;

private:
    std::unordered_map<std::string, ResolverRecord> map_;
};

// Unknown URLs pass through unchanged with links_to_pubmed=false and
// unknown=true; lookup misses are data, not errors.
ResolverRecord resolve_url(const std::string& url, const Resolver& resolver);

// Host patterns deciding the article/social boundary. A pattern is a
// host suffix ("youtube.com") or a host/path prefix
// ("ncbi.nlm.nih.gov/pubmed"). Loaded from a small key=value config;
// the boundary is data, not logic.
struct DomainRules {
    std::vector<std::string> pubmed_hosts;
    std::vector<std::string> social_hosts;

    static DomainRules load(const std::filesystem::path& path);
    // The lists shipped in configs/domains.toml; synth writes the same.
    static DomainRules defaults();

    bool is_pubmed(const std::string& url) const;
    bool is_social(const std::string& url) const;
};

enum class UrlKind { PubMed, Social, Web };

// Classification of one already-expanded URL.
UrlKind classify_url(const std::string& expanded_url, const DomainRules& rules);

// Pure function of (tweet.urls, resolver snapshot, rules).
LinkCategory categorize_tweet(const Tweet& tweet, const Resolver& resolver,
                              const DomainRules& rules);

struct PageFilterResult {
    std::vector<WebPage> kept;
    std::size_t removed_unavailable = 0;
    std::size_t removed_language = 0;
    std::size_t removed_short = 0;
};

// Keeps pages that are available, English, and at least 300 words.
// A removed page is counted once, first failing reason in the order
// above.
PageFilterResult filter_pages(const std::vector<WebPage>& pages);

inline constexpr std::size_t kMinPageWords = 300;

}  // namespace commcred
