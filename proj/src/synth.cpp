#include "commcred/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "commcred/util.hpp"

namespace commcred {

void PlantedPartitionSpec::validate() const {
    if (n == 0) throw UsageError("planted partition: n must be > 0");
    if (k == 0 || k > n) throw UsageError("planted partition: need 1 <= k <= n");
    if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
        throw UsageError("planted partition: need 0 <= p_out < p_in <= 1");
    }
    if (!block_sizes.empty()) {
        std::size_t sum = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
        if (block_sizes.size() != k || sum != n) {
            throw UsageError("planted partition: block_sizes must have k entries summing to n");
        }
        for (std::size_t s : block_sizes) {
            if (s == 0) throw UsageError("planted partition: empty block");
        }
    }
}

std::vector<std::size_t> PlantedPartitionSpec::resolved_block_sizes() const {
    if (!block_sizes.empty()) return block_sizes;
    std::vector<std::size_t> sizes(k, n / k);
    for (std::size_t i = 0; i < n % k; ++i) ++sizes[i];
    return sizes;
}

namespace {

std::string user_name(std::size_t i, std::size_t n) {
    std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
    std::string digits = std::to_string(i);
    return "u" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

SynthGraph gen_graph(const PlantedPartitionSpec& spec) {
    spec.validate();
    SynthGraph out;
    auto sizes = spec.resolved_block_sizes();

    out.users.reserve(spec.n);
    out.truth.comm.reserve(spec.n);
    std::uint32_t block = 0;
    std::size_t filled = 0;
    for (std::size_t i = 0; i < spec.n; ++i) {
        out.users.push_back(user_name(i, spec.n));
        if (filled == sizes[block]) {
            ++block;
            filled = 0;
        }
        out.truth.comm.push_back(block);
        ++filled;
    }
    out.truth.count = static_cast<std::uint32_t>(spec.k);

    Rng rng(spec.seed);
    for (std::size_t u = 0; u < spec.n; ++u) {
        for (std::size_t v = 0; v < spec.n; ++v) {
            if (u == v) continue;
            double p = out.truth.comm[u] == out.truth.comm[v] ? spec.p_in : spec.p_out;
            if (unit_rand(rng) < p) {
                out.edges.push_back({out.users[u], out.users[v]});
            }
        }
    }
    return out;
}

void SynthCorpusSpec::validate() const {
    auto check_mix = [](const double* mix, std::size_t n, const char* what) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mix[i] < 0.0) throw UsageError(std::string(what) + ": negative probability");
            sum += mix[i];
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw UsageError(std::string(what) + ": probabilities must sum to 1");
        }
    };
    check_mix(category_mix.data(), 4, "category_mix");
    check_mix(credibility_mix.data(), 3, "credibility_mix");
    for (const auto& [id, mix] : category_mix_overrides) check_mix(mix.data(), 4, "category_mix");
    for (const auto& [id, mix] : credibility_mix_overrides) {
        check_mix(mix.data(), 3, "credibility_mix");
    }
    if (tweets_per_user == 0) throw UsageError("tweets_per_user must be > 0");
    if (max_likes < 0) throw UsageError("max_likes must be >= 0");
}

std::vector<std::size_t> quota_allocate(std::size_t total, const std::vector<double>& weights) {
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (sum <= 0.0) throw UsageError("quota weights must have a positive sum");

    std::vector<std::size_t> counts(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, index)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double exact = static_cast<double>(total) * weights[i] / sum;
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        remainders.emplace_back(-(exact - std::floor(exact)), i);
    }
    std::sort(remainders.begin(), remainders.end());  // largest remainder first, ties low index
    for (std::size_t r = 0; assigned < total; ++r) {
        ++counts[remainders[r % remainders.size()].second];
        ++assigned;
    }
    return counts;
}

const std::array<std::vector<std::string>, 7>& criterion_keywords() {
    static const std::array<std::vector<std::string>, 7> keywords = {{
        {"peer reviewed journal citation", "institutional laboratory provenance"},
        {"detailed evidence tables supplied", "comprehensive statistical appendix"},
        {"acknowledged methodological limitations", "uncertainty ranges disclosed"},
        {"measured claims avoiding exaggeration", "balanced tone throughout"},
        {"focused contextual scope", "relevant subject matter"},
        {"plain accessible wording", "jargon free explanation"},
        {"funding sponsor credited", "grant disclosure statement"},
    }};
    return keywords;
}

namespace {

constexpr const char* kFillerSentence =
    "this page discusses vaccine safety and community health topics for readers "
    "seeking a broad overview of immunisation programs and public wellbeing ";

std::string make_page_text(const std::array<int, 7>& criteria, std::size_t min_words) {
    std::string text;
    const auto& keywords = criterion_keywords();
    for (int c = 0; c < 7; ++c) {
        if (!criteria[static_cast<std::size_t>(c)]) continue;
        for (const auto& phrase : keywords[static_cast<std::size_t>(c)]) {
            for (int rep = 0; rep < 3; ++rep) {
                text += phrase;
                text += ". ";
            }
        }
    }
    while (whitespace_token_count(text) < min_words) text += kFillerSentence;
    return text;
}

struct MixFor {
    const SynthCorpusSpec& spec;

    std::array<double, 4> category(std::uint32_t community) const {
        for (const auto& [id, mix] : spec.category_mix_overrides) {
            if (id == community) return mix;
        }
        return spec.category_mix;
    }
    std::array<double, 3> credibility(std::uint32_t community) const {
        for (const auto& [id, mix] : spec.credibility_mix_overrides) {
            if (id == community) return mix;
        }
        return spec.credibility_mix;
    }
};

std::size_t sample_index(Rng& rng, const double* weights, std::size_t n) {
    double u = unit_rand(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return n - 1;
}

}  // namespace

SynthCorpus gen_corpus(const SynthCorpusSpec& spec, const SynthGraph& graph) {
    spec.validate();
    SynthCorpus out;
    MixFor mix{spec};
    Rng rng(derive_seed(spec.seed, 0xc0+ 1));

    auto groups = graph.truth.groups();
    out.truth.resize(groups.size());

    std::size_t tweet_seq = 0;
    std::size_t page_seq = 0;
    std::size_t rotation = 0;       // rotates which criteria a page satisfies
    std::size_t bucket_cycle[3] = {0, 0, 0};
    static const int kBucketScores[3][3] = {{0, 1, 2}, {3, 4, 3}, {5, 6, 7}};
    static const char* kSocialUrls[3] = {"https://youtube.com/watch?v=",
                                         "https://facebook.com/posts/",
                                         "https://instagram.com/p/"};

    for (std::uint32_t c = 0; c < groups.size(); ++c) {
        const auto& members = groups[c];
        std::size_t total = members.size() * spec.tweets_per_user;
        CommunityTruth& truth = out.truth[c];
        truth.community_id = c;
        truth.users = members.size();
        truth.tweets = total;

        auto cat_mix = mix.category(c);
        auto cred_mix = mix.credibility(c);

        // Category per tweet slot.
        std::vector<int> slot_category(total);
        if (spec.quota) {
            auto counts = quota_allocate(
                total, std::vector<double>(cat_mix.begin(), cat_mix.end()));
            std::size_t pos = 0;
            for (int cat = 0; cat < 4; ++cat) {
                for (std::size_t i = 0; i < counts[static_cast<std::size_t>(cat)]; ++i) {
                    slot_category[pos++] = cat + 1;
                }
            }
        } else {
            for (auto& s : slot_category) {
                s = static_cast<int>(sample_index(rng, cat_mix.data(), 4)) + 1;
            }
        }

        // Bucket per category-2 slot.
        std::size_t cat2_total = static_cast<std::size_t>(
            std::count(slot_category.begin(), slot_category.end(), 2));
        std::vector<int> cat2_bucket(cat2_total);
        if (spec.quota) {
            auto counts = quota_allocate(
                cat2_total, std::vector<double>(cred_mix.begin(), cred_mix.end()));
            std::size_t pos = 0;
            for (int b = 0; b < 3; ++b) {
                for (std::size_t i = 0; i < counts[static_cast<std::size_t>(b)]; ++i) {
                    cat2_bucket[pos++] = b;
                }
            }
        } else {
            for (auto& b : cat2_bucket) {
                b = static_cast<int>(sample_index(rng, cred_mix.data(), 3));
            }
        }

        std::size_t slot = 0;
        std::size_t cat2_seen = 0;
        for (NodeId member : members) {
            const std::string& user = graph.users[member];
            for (std::size_t t = 0; t < spec.tweets_per_user; ++t, ++slot) {
                Tweet tw;
                tw.tweet_id = "t" + std::to_string(tweet_seq++);
                tw.user_id = user;
                tw.lang = "en";
                tw.like_count = static_cast<long long>(
                    bounded_rand(rng, static_cast<std::uint64_t>(spec.max_likes + 1)));
                tw.is_retweet = tweet_seq % 5 == 0;

                int cat = slot_category[slot];
                ++truth.category_counts[static_cast<std::size_t>(cat - 1)];
                switch (cat) {
                    case 1: {
                        tw.text = "sharing a study about vaccines";
                        tw.urls.push_back("https://pubmed.ncbi.nlm.nih.gov/" +
                                          std::to_string(100000 + page_seq + tweet_seq) + "/");
                        break;
                    }
                    case 2: {
                        int b = cat2_bucket[cat2_seen++];
                        ++truth.bucket_counts[static_cast<std::size_t>(b)];
                        int score =
                            kBucketScores[b][bucket_cycle[b]++ % (b == 1 ? 2u : 3u)];

                        WebPage page;
                        page.url = "https://pages.example.org/p" + std::to_string(page_seq);
                        page.lang = "en";
                        page.available = true;
                        LabeledPage label;
                        label.url = page.url;
                        for (int i = 0; i < score; ++i) {
                            label.criteria[(rotation + static_cast<std::size_t>(i)) % 7] = 1;
                        }
                        ++rotation;
                        page.content = make_page_text(label.criteria, 320);
                        page.word_count = whitespace_token_count(page.content);
                        out.pages.push_back(page);
                        out.labels.push_back(label);

                        bool shorten = spec.shorten_every > 0 &&
                                       page_seq % spec.shorten_every == spec.shorten_every - 1;
                        if (shorten) {
                            ResolverRecord rec;
                            rec.short_url = "https://sh.example/" + std::to_string(page_seq);
                            rec.expanded_url = page.url;
                            rec.links_to_pubmed = b == 2;
                            out.fixtures.push_back(rec);
                            tw.urls.push_back(rec.short_url);
                        } else {
                            tw.urls.push_back(page.url);
                        }
                        tw.text = "worth reading about vaccine coverage";
                        ++page_seq;
                        break;
                    }
                    case 3: {
                        tw.text = "watch this clip about vaccines";
                        tw.urls.push_back(std::string(kSocialUrls[tweet_seq % 3]) +
                                          std::to_string(tweet_seq));
                        break;
                    }
                    default: {
                        tw.text = "talking about vaccines with friends today";
                        break;
                    }
                }
                out.tweets.push_back(std::move(tw));
            }
        }
    }

    for (std::size_t i = 0; i < spec.extra_non_english; ++i) {
        Tweet tw;
        tw.tweet_id = "t" + std::to_string(tweet_seq++);
        tw.user_id = graph.users.empty() ? "u0" : graph.users[0];
        tw.text = "contenu dans une autre langue";
        tw.lang = "fr";
        tw.like_count = 0;
        out.tweets.push_back(std::move(tw));
    }
    return out;
}

namespace {

using nlohmann::ordered_json;

std::string jsonl_tweets(const std::vector<Tweet>& tweets) {
    std::string out;
    for (const auto& t : tweets) {
        ordered_json j;
        j["tweet_id"] = t.tweet_id;
        j["user_id"] = t.user_id;
        j["text"] = t.text;
        j["urls"] = t.urls;
        j["like_count"] = t.like_count;
        j["is_retweet"] = t.is_retweet;
        j["lang"] = t.lang;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string jsonl_pages(const std::vector<WebPage>& pages) {
    std::string out;
    for (const auto& p : pages) {
        ordered_json j;
        j["url"] = p.url;
        j["content"] = p.content;
        j["lang"] = p.lang;
        j["available"] = p.available;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string jsonl_fixtures(const std::vector<ResolverRecord>& fixtures) {
    std::string out;
    for (const auto& f : fixtures) {
        ordered_json j;
        j["short_url"] = f.short_url;
        j["expanded_url"] = f.expanded_url;
        j["links_to_pubmed"] = f.links_to_pubmed;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string domains_toml() {
    DomainRules rules = DomainRules::defaults();
    std::string out = "# Host patterns for tweet link categorization.\n";
    out += "pubmed_hosts = [";
    for (std::size_t i = 0; i < rules.pubmed_hosts.size(); ++i) {
        out += (i ? ", \"" : "\"") + rules.pubmed_hosts[i] + "\"";
    }
    out += "]\nsocial_hosts = [";
    for (std::size_t i = 0; i < rules.social_hosts.size(); ++i) {
        out += (i ? ", \"" : "\"") + rules.social_hosts[i] + "\"";
    }
    out += "]\n";
    return out;
}

}  // namespace

SynthFiles write_synth_dataset(const SynthGraph& graph, const SynthCorpus& corpus,
                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    SynthFiles files;
    files.tweets = out_dir / "tweets.jsonl";
    files.followers = out_dir / "followers.csv";
    files.pages = out_dir / "pages.jsonl";
    files.labels = out_dir / "labels.csv";
    files.resolver_fixtures = out_dir / "resolver_fixtures.jsonl";
    files.domains = out_dir / "domains.toml";
    files.truth = out_dir / "truth.json";

    atomic_write_file(files.tweets, jsonl_tweets(corpus.tweets));

    std::string followers = "from_user,to_user\n";
    for (const auto& e : graph.edges) {
        followers += csv_field(e.from_user) + "," + csv_field(e.to_user) + "\n";
    }
    atomic_write_file(files.followers, followers);

    atomic_write_file(files.pages, jsonl_pages(corpus.pages));

    std::string labels = "url,c1,c2,c3,c4,c5,c6,c7\n";
    for (const auto& l : corpus.labels) {
        labels += csv_field(l.url);
        for (int c : l.criteria) labels += "," + std::to_string(c);
        labels += '\n';
    }
    atomic_write_file(files.labels, labels);

    atomic_write_file(files.resolver_fixtures, jsonl_fixtures(corpus.fixtures));
    atomic_write_file(files.domains, domains_toml());

    ordered_json truth;
    truth["users"] = graph.users;
    ordered_json assignment = ordered_json::object();
    for (std::size_t i = 0; i < graph.users.size(); ++i) {
        assignment[graph.users[i]] = graph.truth.comm[i];
    }
    truth["assignment"] = assignment;
    truth["communities"] = ordered_json::array();
    for (const auto& t : corpus.truth) {
        ordered_json e;
        e["id"] = t.community_id;
        e["users"] = t.users;
        e["tweets"] = t.tweets;
        e["category_counts"] = t.category_counts;
        e["bucket_counts"] = t.bucket_counts;
        truth["communities"].push_back(e);
    }
    atomic_write_file(files.truth, truth.dump(2) + "\n");
    return files;
}

}  // namespace commcred
