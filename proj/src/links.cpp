#include "commcred/links.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "commcred/config.hpp"
#include "commcred/util.hpp"

namespace commcred {

FixtureResolver FixtureResolver::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read resolver fixtures: " + path.string());
    FixtureResolver r;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("short_url") ||
            !j["short_url"].is_string()) {
            throw UsageError("resolver fixtures line " + std::to_string(row) + ": malformed");
        }
        ResolverRecord rec;
        rec.short_url = j["short_url"].get<std::string>();
        rec.expanded_url =
            j.contains("expanded_url") && j["expanded_url"].is_string()
                ? j["expanded_url"].get<std::string>()
                : rec.short_url;
        if (rec.expanded_url.empty()) rec.expanded_url = rec.short_url;
        rec.links_to_pubmed =
            j.contains("links_to_pubmed") && j["links_to_pubmed"].is_boolean() &&
            j["links_to_pubmed"].get<bool>();
        r.add(std::move(rec));
    }
    return r;
}

void FixtureResolver::add(ResolverRecord record) {
    std::string key = record.short_url;
    map_[std::move(key)] = std::move(record);
}

std::optional<ResolverRecord> FixtureResolver::lookup(const std::string& url) const {
    auto it = map_.find(url);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

ResolverRecord resolve_url(const std::string& url, const Resolver& resolver) {
    if (auto rec = resolver.lookup(url)) return *rec;
    ResolverRecord rec;
    rec.short_url = url;
    rec.expanded_url = url;
    rec.links_to_pubmed = false;
    rec.unknown = true;
    return rec;
}

namespace {

// host + path of a URL, lowercased host, leading "www." removed.
std::pair<std::string, std::string> host_and_path(const std::string& url) {
    std::string rest = url;
    auto scheme = rest.find("://");
    if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
    std::string host = rest;
    std::string path;
    auto slash = rest.find_first_of("/?#");
    if (slash != std::string::npos) {
        host = rest.substr(0, slash);
        if (rest[slash] == '/') path = rest.substr(slash);
    }
    auto at = host.find('@');
    if (at != std::string::npos) host = host.substr(at + 1);
    auto colon = host.find(':');
    if (colon != std::string::npos) host = host.substr(0, colon);
    host = to_lower(host);
    if (host.rfind("www.", 0) == 0) host = host.substr(4);
    return {host, path};
}

bool matches_pattern(const std::string& host, const std::string& path,
                     const std::string& pattern) {
    std::string pat = to_lower(pattern);
    auto slash = pat.find('/');
    if (slash == std::string::npos) {
        // Host suffix match on label boundary.
        if (host == pat) return true;
        return host.size() > pat.size() &&
               host.compare(host.size() - pat.size(), pat.size(), pat) == 0 &&
               host[host.size() - pat.size() - 1] == '.';
    }
    std::string pat_host = pat.substr(0, slash);
    std::string pat_path = pat.substr(slash);
    if (host != pat_host) return false;
    return path.rfind(pat_path, 0) == 0;
}

bool matches_any(const std::string& url, const std::vector<std::string>& patterns) {
    auto [host, path] = host_and_path(url);
    if (host.empty()) return false;
    return std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
        return matches_pattern(host, path, p);
    });
}

}  // namespace

DomainRules DomainRules::defaults() {
    DomainRules r;
    r.pubmed_hosts = {"pubmed.ncbi.nlm.nih.gov", "ncbi.nlm.nih.gov/pubmed",
                      "ncbi.nlm.nih.gov/pmc"};
    r.social_hosts = {"facebook.com", "fb.com",      "youtube.com", "youtu.be",
                      "instagram.com", "twitter.com", "tiktok.com"};
    return r;
}

DomainRules DomainRules::load(const std::filesystem::path& path) {
    TomlTable t = TomlTable::parse_file(path);
    DomainRules r;
    r.pubmed_hosts = t.get_string_array("pubmed_hosts");
    r.social_hosts = t.get_string_array("social_hosts");
    if (r.pubmed_hosts.empty() || r.social_hosts.empty()) {
        throw UsageError("domain config " + path.string() +
                         " must set pubmed_hosts and social_hosts");
    }
    return r;
}

bool DomainRules::is_pubmed(const std::string& url) const {
    return matches_any(url, pubmed_hosts);
}

bool DomainRules::is_social(const std::string& url) const {
    return matches_any(url, social_hosts);
}

UrlKind classify_url(const std::string& expanded_url, const DomainRules& rules) {
    if (rules.is_pubmed(expanded_url)) return UrlKind::PubMed;
    if (rules.is_social(expanded_url)) return UrlKind::Social;
    return UrlKind::Web;
}

LinkCategory categorize_tweet(const Tweet& tweet, const Resolver& resolver,
                              const DomainRules& rules) {
    if (tweet.urls.empty()) return LinkCategory::NoUrl;
    bool any_pubmed = false, any_web = false;
    for (const auto& url : tweet.urls) {
        ResolverRecord rec = resolve_url(url, resolver);
        switch (classify_url(rec.expanded_url, rules)) {
            case UrlKind::PubMed: any_pubmed = true; break;
            case UrlKind::Web: any_web = true; break;
            case UrlKind::Social: break;
        }
    }
    if (any_pubmed) return LinkCategory::PubMedDirect;
    if (any_web) return LinkCategory::WebPage;
    return LinkCategory::SocialMedia;
}

PageFilterResult filter_pages(const std::vector<WebPage>& pages) {
    PageFilterResult r;
    for (const auto& p : pages) {
        if (!p.available) {
            ++r.removed_unavailable;
            continue;
        }
        if (p.lang != "en") {
            ++r.removed_language;
            continue;
        }
        if (p.word_count < kMinPageWords) {
            ++r.removed_short;
            continue;
        }
        r.kept.push_back(p);
    }
    return r;
}

}  // namespace commcred
