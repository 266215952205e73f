#include "commcred/commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "commcred/community.hpp"
#include "commcred/credibility.hpp"
#include "commcred/graph.hpp"
#include "commcred/ingest.hpp"
#include "commcred/links.hpp"
#include "commcred/measures.hpp"
#include "commcred/synth.hpp"
#include "commcred/util.hpp"

namespace commcred {

namespace {

using nlohmann::ordered_json;

void require_input(const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw UsageError(std::string("missing input: no ") + what + " configured");
    if (!std::filesystem::exists(p)) {
        throw UsageError(std::string("missing input: ") + what + " file not found: " + p.string());
    }
}

struct Manifest {
    ordered_json j;

    Manifest(const char* command, const RunConfig& cfg) {
        j["command"] = command;
        j["config_hash"] = cfg.config_hash();
        j["seed"] = cfg.seed;
        j["inputs"] = ordered_json::object();
        j["counters"] = ordered_json::object();
        j["outputs"] = ordered_json::array();
    }

    void input(const std::filesystem::path& p) {
        if (!p.empty() && std::filesystem::exists(p)) j["inputs"][p.string()] = file_digest(p);
    }
    void counter(const std::string& name, std::uint64_t value) { j["counters"][name] = value; }
    void output(const std::filesystem::path& p) { j["outputs"].push_back(p.string()); }
    void write(const std::filesystem::path& dir) {
        atomic_write_file(dir / "manifest.json", j.dump(2) + "\n");
    }
};

// Loads followers + optional tweet users, builds both graph views.
struct GraphBundle {
    DirectedGraph directed;
    FollowerGraph graph;
    FollowerLoadCounters counters;
    std::size_t tweet_only_users = 0;
};

GraphBundle build_graphs(const RunConfig& cfg, const std::vector<Tweet>* tweets) {
    require_input(cfg.followers, "followers");
    auto loaded = load_followers(cfg.followers);
    if (loaded.edges.empty()) throw UsageError("no edges in " + cfg.followers.string());

    GraphBundle b;
    b.counters = loaded.counters;

    std::vector<std::string> extra;
    if (tweets) {
        std::unordered_set<std::string> known;
        for (const auto& e : loaded.edges) {
            known.insert(e.from_user);
            known.insert(e.to_user);
        }
        std::unordered_set<std::string> added;
        for (const auto& t : *tweets) {
            if (!known.count(t.user_id) && added.insert(t.user_id).second) {
                extra.push_back(t.user_id);
            }
        }
        std::sort(extra.begin(), extra.end());
        b.tweet_only_users = extra.size();
    }

    b.directed = build_directed(loaded.edges, extra);
    b.graph = symmetrize(b.directed);
    return b;
}

std::string partition_csv(const FollowerGraph& g, const Partition& p) {
    // Sorted by user id; community ids renumbered in that visit order.
    std::vector<std::pair<std::string, NodeId>> users;
    users.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) users.emplace_back(g.index().name(u), u);
    std::sort(users.begin(), users.end());

    constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t> relabel(p.count, kUnset);
    std::uint32_t next = 0;
    std::string out = "user_id,community_id\n";
    for (const auto& [name, node] : users) {
        std::uint32_t c = p.comm[node];
        if (relabel[c] == kUnset) relabel[c] = next++;
        out += csv_field(name) + "," + std::to_string(relabel[c]) + "\n";
    }
    return out;
}

void print_size_histogram(const Partition& p, std::ostream& os) {
    auto sizes = p.sizes();
    std::map<std::size_t, std::size_t> hist;
    for (auto s : sizes) ++hist[s];
    os << "communities: " << p.count << "\n";
    os << "size histogram (size: count):\n";
    for (const auto& [size, count] : hist) {
        os << "  " << size << ": " << count << "\n";
    }
}

std::string refine_log_jsonl(const RefineResult& r) {
    std::string out;
    for (const auto& round : r.rounds) {
        ordered_json j;
        j["round"] = round.round;
        j["q"] = round.q;
        j["communities"] = round.communities;
        j["largest"] = round.largest;
        j["splits"] = round.splits;
        j["merges"] = round.merges;
        j["changed"] = round.changed;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::unordered_map<std::string, std::uint32_t> load_partition_csv(
    const std::filesystem::path& path) {
    std::string content = read_file(path);
    std::unordered_map<std::string, std::uint32_t> assignment;
    std::size_t pos = 0;
    bool header = true;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? std::string::npos
                                                                        : eol - pos);
        pos = eol == std::string::npos ? content.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = parse_csv_record(line);
        if (!fields || fields->size() != 2) {
            throw UsageError("malformed partition row in " + path.string() + ": " + line);
        }
        assignment[(*fields)[0]] = static_cast<std::uint32_t>(std::stoul((*fields)[1]));
    }
    if (assignment.empty()) throw UsageError("empty partition file: " + path.string());
    return assignment;
}

struct ScoreRow {
    int score = 0;
    Bucket bucket = Bucket::Low;
};

std::unordered_map<std::string, ScoreRow> load_scores_csv(const std::filesystem::path& path) {
    std::string content = read_file(path);
    std::unordered_map<std::string, ScoreRow> scores;
    std::size_t pos = 0;
    bool header = true;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string line = content.substr(pos, eol == std::string::npos ? std::string::npos
                                                                        : eol - pos);
        pos = eol == std::string::npos ? content.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = parse_csv_record(line);
        if (!fields || fields->size() < 3) {
            throw UsageError("malformed scores row in " + path.string() + ": " + line);
        }
        ScoreRow row;
        row.score = std::stoi((*fields)[1]);
        row.bucket = bucket(row.score);
        scores[(*fields)[0]] = row;
    }
    return scores;
}

}  // namespace

int cmd_synth(const SynthCliConfig& cfg) {
    PlantedPartitionSpec graph_spec;
    SynthCorpusSpec corpus_spec;

    if (!cfg.spec_file.empty()) {
        TomlTable t = TomlTable::parse_file(cfg.spec_file);
        graph_spec.n = static_cast<std::size_t>(t.get_int("graph.n", 100));
        graph_spec.k = static_cast<std::size_t>(t.get_int("graph.k", 4));
        graph_spec.p_in = t.get_double("graph.p_in", 0.3);
        graph_spec.p_out = t.get_double("graph.p_out", 0.01);
        for (double s : t.get_double_array("graph.block_sizes")) {
            graph_spec.block_sizes.push_back(static_cast<std::size_t>(s));
        }
        graph_spec.seed = static_cast<std::uint64_t>(t.get_int("run.seed", 0));

        corpus_spec.tweets_per_user =
            static_cast<std::size_t>(t.get_int("corpus.tweets_per_user", 5));
        auto cat = t.get_double_array("corpus.category_mix");
        if (!cat.empty()) {
            if (cat.size() != 4) throw UsageError("corpus.category_mix needs 4 entries");
            std::copy(cat.begin(), cat.end(), corpus_spec.category_mix.begin());
        }
        auto cred = t.get_double_array("corpus.credibility_mix");
        if (!cred.empty()) {
            if (cred.size() != 3) throw UsageError("corpus.credibility_mix needs 3 entries");
            std::copy(cred.begin(), cred.end(), corpus_spec.credibility_mix.begin());
        }
        for (const auto& key : t.keys()) {
            const std::string cat_prefix = "corpus.category_mix_";
            const std::string cred_prefix = "corpus.credibility_mix_";
            if (key.rfind(cat_prefix, 0) == 0) {
                std::uint32_t id =
                    static_cast<std::uint32_t>(std::stoul(key.substr(cat_prefix.size())));
                auto mix = t.get_double_array(key);
                if (mix.size() != 4) throw UsageError(key + " needs 4 entries");
                std::array<double, 4> a{};
                std::copy(mix.begin(), mix.end(), a.begin());
                corpus_spec.category_mix_overrides.emplace_back(id, a);
            } else if (key.rfind(cred_prefix, 0) == 0) {
                std::uint32_t id =
                    static_cast<std::uint32_t>(std::stoul(key.substr(cred_prefix.size())));
                auto mix = t.get_double_array(key);
                if (mix.size() != 3) throw UsageError(key + " needs 3 entries");
                std::array<double, 3> a{};
                std::copy(mix.begin(), mix.end(), a.begin());
                corpus_spec.credibility_mix_overrides.emplace_back(id, a);
            }
        }
        corpus_spec.quota = t.get_bool("corpus.quota", true);
        corpus_spec.shorten_every =
            static_cast<std::size_t>(t.get_int("corpus.shorten_every", 3));
        corpus_spec.extra_non_english =
            static_cast<std::size_t>(t.get_int("corpus.extra_non_english", 0));
        corpus_spec.max_likes = t.get_int("corpus.max_likes", 100);
        corpus_spec.seed = graph_spec.seed;
    }
    if (cfg.seed_overridden) {
        graph_spec.seed = cfg.seed;
        corpus_spec.seed = cfg.seed;
    }

    SynthGraph graph = gen_graph(graph_spec);
    SynthCorpus corpus = gen_corpus(corpus_spec, graph);
    SynthFiles files = write_synth_dataset(graph, corpus, cfg.out_dir);

    std::cout << "synth: wrote " << corpus.tweets.size() << " tweets, " << graph.edges.size()
              << " follows, " << corpus.pages.size() << " pages to " << cfg.out_dir.string()
              << "\n";
    return kExitOk;
}

int cmd_detect(const RunConfig& cfg) {
    std::vector<Tweet> tweets;
    bool have_tweets = !cfg.tweets.empty() && std::filesystem::exists(cfg.tweets);
    TweetLoadCounters tweet_counters;
    if (have_tweets) {
        auto loaded = load_tweets(cfg.tweets);
        tweets = std::move(loaded.tweets);
        tweet_counters = loaded.counters;
    }
    GraphBundle b = build_graphs(cfg, have_tweets ? &tweets : nullptr);

    RefinementConfig rc;
    rc.max_size = cfg.max_size;
    rc.min_size = cfg.min_size;
    rc.max_rounds = cfg.max_rounds;
    rc.seed = cfg.seed;
    RefineResult result = refine(b.graph, rc);

    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_file(cfg.out_dir / "partition.csv", partition_csv(b.graph, result.partition));
    atomic_write_file(cfg.out_dir / "refine_log.jsonl", refine_log_jsonl(result));
    if (cfg.dump_graph) {
        atomic_write_file(cfg.out_dir / "graph.csv", graph_dump_csv(b.graph));
    }

    Manifest m("detect", cfg);
    m.input(cfg.followers);
    if (have_tweets) m.input(cfg.tweets);
    m.counter("edges", b.counters.loaded);
    m.counter("self_follows", b.counters.self_follows);
    m.counter("duplicate_edges", b.counters.duplicates);
    m.counter("malformed_edges", b.counters.malformed);
    m.counter("tweet_only_users", b.tweet_only_users);
    m.counter("nodes", b.graph.node_count());
    m.counter("communities", result.partition.count);
    m.counter("rounds_used", static_cast<std::uint64_t>(result.rounds_used));
    m.counter("fixpoint", result.fixpoint ? 1 : 0);
    m.output((cfg.out_dir / "partition.csv").string());
    m.output((cfg.out_dir / "refine_log.jsonl").string());
    m.write(cfg.out_dir);

    print_size_histogram(result.partition, std::cout);
    if (!result.fixpoint) {
        std::cerr << "warning: refinement stopped at max_rounds=" << cfg.max_rounds
                  << " without reaching a fixpoint\n";
    }
    return kExitOk;
}

namespace {

// Tweet categorization shared by categorize and characterize.
struct CategorizedTweets {
    std::vector<LinkCategory> categories;  // parallel to tweets
    std::array<std::size_t, 4> counts{};
    std::size_t cat2_with_article_link = 0;
};

CategorizedTweets categorize_all(const std::vector<Tweet>& tweets, const Resolver& resolver,
                                 const DomainRules& rules) {
    CategorizedTweets out;
    out.categories.reserve(tweets.size());
    for (const auto& t : tweets) {
        LinkCategory cat = categorize_tweet(t, resolver, rules);
        out.categories.push_back(cat);
        ++out.counts[static_cast<std::size_t>(static_cast<int>(cat) - 1)];
        if (cat == LinkCategory::WebPage) {
            for (const auto& url : t.urls) {
                ResolverRecord rec = resolve_url(url, resolver);
                if (rec.links_to_pubmed) {
                    ++out.cat2_with_article_link;
                    break;
                }
            }
        }
    }
    return out;
}

FixtureResolver load_resolver(const RunConfig& cfg) {
    if (!cfg.resolver_fixtures.empty() && std::filesystem::exists(cfg.resolver_fixtures)) {
        return FixtureResolver::load(cfg.resolver_fixtures);
    }
    return FixtureResolver{};
}

}  // namespace

int cmd_categorize(const RunConfig& cfg) {
    require_input(cfg.tweets, "tweets");
    require_input(cfg.domains, "domains");
    auto loaded = load_tweets(cfg.tweets);
    FixtureResolver resolver = load_resolver(cfg);
    DomainRules rules = DomainRules::load(cfg.domains);

    CategorizedTweets cats = categorize_all(loaded.tweets, resolver, rules);

    std::string csv = "tweet_id,user_id,category\n";
    for (std::size_t i = 0; i < loaded.tweets.size(); ++i) {
        csv += csv_field(loaded.tweets[i].tweet_id) + "," +
               csv_field(loaded.tweets[i].user_id) + "," +
               std::to_string(static_cast<int>(cats.categories[i])) + "\n";
    }
    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_file(cfg.out_dir / "categories.csv", csv);

    Manifest m("categorize", cfg);
    m.input(cfg.tweets);
    m.input(cfg.resolver_fixtures);
    m.input(cfg.domains);
    m.counter("tweets", loaded.counters.loaded);
    m.counter("non_english", loaded.counters.non_english);
    m.counter("malformed", loaded.counters.malformed);
    m.counter("duplicates", loaded.counters.duplicates);
    for (int c = 0; c < 4; ++c) {
        m.counter("category_" + std::to_string(c + 1),
                  cats.counts[static_cast<std::size_t>(c)]);
    }
    m.counter("category_2_with_article_link", cats.cat2_with_article_link);
    m.output((cfg.out_dir / "categories.csv").string());
    m.write(cfg.out_dir);

    std::cout << "categories: cat1=" << cats.counts[0] << " cat2=" << cats.counts[1]
              << " cat3=" << cats.counts[2] << " cat4=" << cats.counts[3] << "\n";
    return kExitOk;
}

int cmd_score(const RunConfig& cfg) {
    require_input(cfg.pages, "pages");
    require_input(cfg.labels, "labels");

    auto pages = load_pages(cfg.pages);
    auto labels = load_labeled_pages(cfg.labels);

    std::unordered_map<std::string, const WebPage*> by_url;
    for (const auto& p : pages.pages) by_url[p.url] = &p;

    std::vector<LabeledPage> labeled;
    std::vector<std::string> texts;
    std::size_t labels_without_page = 0;
    for (const auto& l : labels) {
        auto it = by_url.find(l.url);
        if (it == by_url.end() || it->second->content.empty()) {
            ++labels_without_page;
            continue;
        }
        labeled.push_back(l);
        texts.push_back(it->second->content);
    }
    if (labeled.size() < static_cast<std::size_t>(cfg.cv_folds)) {
        throw UsageError("need at least " + std::to_string(cfg.cv_folds) +
                         " labeled pages with content, got " + std::to_string(labeled.size()));
    }

    CvConfig cv;
    cv.folds = cfg.cv_folds;
    cv.seed = cfg.seed;
    cv.svm.lambda = cfg.svm_lambda;
    cv.svm.epochs = cfg.svm_epochs;
    cv.svm.learning_rate = cfg.svm_learning_rate;
    cv.rf.n_trees = cfg.rf_trees;
    cv.rf.max_depth = cfg.rf_max_depth;
    cv.rf.min_leaf = cfg.rf_min_leaf;

    CredibilityModelSet models = train_model_set(labeled, texts, cv);

    PageFilterResult filtered = filter_pages(pages.pages);

    std::vector<const WebPage*> to_score;
    for (const auto& p : filtered.kept) to_score.push_back(&p);
    std::sort(to_score.begin(), to_score.end(),
              [](const WebPage* a, const WebPage* b) { return a->url < b->url; });

    std::string csv = "url,score,bucket,c1,c2,c3,c4,c5,c6,c7\n";
    for (const WebPage* p : to_score) {
        CredibilityScore s = score_page(*p, models);
        csv += csv_field(p->url) + "," + std::to_string(s.score) + "," + bucket_name(s.bucket);
        for (int c : s.per_criterion) csv += "," + std::to_string(c);
        csv += '\n';
    }
    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_file(cfg.out_dir / "scores.csv", csv);
    save_model_set(models, cfg.out_dir / "model.json");

    Manifest m("score", cfg);
    m.input(cfg.pages);
    m.input(cfg.labels);
    m.counter("pages", pages.counters.loaded);
    m.counter("pages_malformed", pages.counters.malformed);
    m.counter("labels", labels.size());
    m.counter("labels_without_page", labels_without_page);
    m.counter("filtered_kept", filtered.kept.size());
    m.counter("removed_unavailable", filtered.removed_unavailable);
    m.counter("removed_language", filtered.removed_language);
    m.counter("removed_short", filtered.removed_short);
    ordered_json acc;
    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        ordered_json entry;
        entry["criterion"] = c + 1;
        entry["svm"] = models.svm_cv_accuracy[cz];
        entry["rf"] = models.rf_cv_accuracy[cz];
        entry["selected"] = models.selection[cz] == Algo::Svm ? "svm" : "rf";
        acc.push_back(entry);
    }
    m.j["cv_accuracy"] = acc;
    m.output((cfg.out_dir / "scores.csv").string());
    m.output((cfg.out_dir / "model.json").string());
    m.write(cfg.out_dir);

    std::cout << "cv accuracy per criterion (svm / rf):\n";
    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        std::cout << "  c" << (c + 1) << ": " << format_double(models.svm_cv_accuracy[cz])
                  << " / " << format_double(models.rf_cv_accuracy[cz]) << " -> "
                  << (models.selection[cz] == Algo::Svm ? "svm" : "rf") << "\n";
    }
    std::cout << "scored " << to_score.size() << " pages\n";
    return kExitOk;
}

int cmd_characterize(const RunConfig& cfg) {
    require_input(cfg.tweets, "tweets");
    require_input(cfg.followers, "followers");
    require_input(cfg.domains, "domains");
    if (cfg.partition.empty() || !std::filesystem::exists(cfg.partition)) {
        throw UsageError("missing upstream output: partition.csv (run detect first)");
    }
    if (cfg.scores.empty() || !std::filesystem::exists(cfg.scores)) {
        throw UsageError("missing upstream output: scores.csv (run score first)");
    }

    auto tweets = load_tweets(cfg.tweets);
    auto assignment = load_partition_csv(cfg.partition);
    auto scores = load_scores_csv(cfg.scores);
    FixtureResolver resolver = load_resolver(cfg);
    DomainRules rules = DomainRules::load(cfg.domains);

    GraphBundle b = build_graphs(cfg, &tweets.tweets);

    // The stored partition must cover the graph exactly; community ids
    // are kept as stored so measures.csv stays joinable to partition.csv.
    Partition p;
    p.comm.resize(b.graph.node_count());
    std::uint32_t max_comm = 0;
    for (NodeId u = 0; u < b.graph.node_count(); ++u) {
        auto it = assignment.find(b.graph.index().name(u));
        if (it == assignment.end()) {
            throw UsageError("partition.csv does not cover user " + b.graph.index().name(u) +
                             "; rerun detect on these inputs");
        }
        p.comm[u] = it->second;
        max_comm = std::max(max_comm, it->second);
    }
    p.count = max_comm + 1;
    for (std::size_t s : p.sizes()) {
        if (s == 0) {
            throw UsageError("partition.csv has non-contiguous community ids; rerun detect");
        }
    }

    // Annotate tweets: category + buckets of scored category-2 links.
    std::vector<AnnotatedTweet> annotated;
    std::size_t tweets_outside_graph = 0;
    std::size_t scored_link_occurrences = 0;
    for (const auto& t : tweets.tweets) {
        auto node = b.graph.index().find(t.user_id);
        if (!node) {
            ++tweets_outside_graph;
            continue;
        }
        AnnotatedTweet at;
        at.user = *node;
        at.like_count = t.like_count;
        at.category = categorize_tweet(t, resolver, rules);
        for (const auto& url : t.urls) {
            ResolverRecord rec = resolve_url(url, resolver);
            if (classify_url(rec.expanded_url, rules) != UrlKind::Web) continue;
            auto it = scores.find(rec.expanded_url);
            if (it != scores.end()) {
                at.scored_buckets.push_back(it->second.bucket);
                ++scored_link_occurrences;
            }
        }
        annotated.push_back(std::move(at));
    }

    MeasureStats stats;
    auto profiles =
        profile_communities(b.graph, p, annotated, b.directed.in_degrees(), &stats);

    std::filesystem::create_directories(cfg.out_dir);
    atomic_write_file(cfg.out_dir / "measures.csv", measures_csv(profiles));

    std::vector<std::string> wanted = cfg.measures;
    if (wanted.empty()) {
        wanted.assign(measure_names().begin(), measure_names().end());
    }
    auto adjacency = community_adjacency(b.graph, p);
    std::filesystem::path viz_dir = cfg.out_dir / "viz";
    for (const auto& name : wanted) {
        VizDocuments docs = emit_viz(profiles, adjacency, name, cfg.viz_edge_floor);
        atomic_write_file(viz_dir / (name + ".json"), docs.json);
        atomic_write_file(viz_dir / (name + ".dot"), docs.dot);
    }

    ordered_json report;
    report["command"] = "characterize";
    report["config_hash"] = cfg.config_hash();
    report["seed"] = cfg.seed;
    report["communities"] = profiles.size();
    report["counters"] = {
        {"tweets", tweets.counters.loaded},
        {"non_english", tweets.counters.non_english},
        {"malformed_tweets", tweets.counters.malformed},
        {"duplicate_tweets", tweets.counters.duplicates},
        {"tweets_outside_graph", tweets_outside_graph},
        {"tweet_only_users", b.tweet_only_users},
        {"scored_link_occurrences", scored_link_occurrences},
        {"density_weight_clamps", stats.density_weight_clamps},
    };
    atomic_write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");

    Manifest m("characterize", cfg);
    m.input(cfg.tweets);
    m.input(cfg.followers);
    m.input(cfg.partition);
    m.input(cfg.scores);
    m.input(cfg.domains);
    m.input(cfg.resolver_fixtures);
    m.counter("communities", profiles.size());
    m.counter("tweets", tweets.counters.loaded);
    m.counter("tweets_outside_graph", tweets_outside_graph);
    m.counter("scored_link_occurrences", scored_link_occurrences);
    m.counter("density_weight_clamps", stats.density_weight_clamps);
    m.output((cfg.out_dir / "measures.csv").string());
    m.output((cfg.out_dir / "report.json").string());
    for (const auto& name : wanted) {
        m.output((viz_dir / (name + ".json")).string());
        m.output((viz_dir / (name + ".dot")).string());
    }
    m.write(cfg.out_dir);

    std::cout << "characterized " << profiles.size() << " communities over "
              << annotated.size() << " tweets\n";
    return kExitOk;
}

int run_protected(const std::string& what, int (*fn)(const RunConfig&), const RunConfig& cfg) {
    try {
        return fn(cfg);
    } catch (const UsageError& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvariantError& e) {
        std::cerr << what << ": invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return kExitInvariant;
    }
}

}  // namespace commcred
