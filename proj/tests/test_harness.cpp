#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>
#include <unistd.h>

#include "trustbench/harness.hpp"

#include "trustbench/auditor.hpp"

#include "fixtures.hpp"

using namespace trustbench;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("trustbench_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static std::atomic<int>& counter() {
        static std::atomic<int> c{0};
        return c;
    }
};

VariantMatrix small_matrix(int samples, uint64_t seed = 3) {
    std::vector<ArtifactBundle> accepted;
    for (int i = 0; i < samples; ++i)
        accepted.push_back(fixtures::passing_bundle("s" + std::to_string(i), i));
    std::vector<std::string> ids;
    for (const auto& b : accepted) ids.push_back(b.sample_id);
    std::vector<PerturbationRecord> records;
    for (Variant family : mutation_variants()) {
        auto plan = plan_assignments(ids, family, seed);
        for (const auto& b : accepted) {
            const MutationAssignment& a = plan.at(b.sample_id);
            json reply =
                json::parse(canned_mutation_reply(b, family, a.severity, a.strategy));
            records.push_back(validate_mutation(b, reply, family, a.severity, a.strategy));
        }
    }
    return assemble_variant_matrix(accepted, records);
}

EndpointProfile auditor_profile(const std::string& model_id, const std::string& locator,
                                int concurrency = 2) {
    EndpointProfile p;
    p.locator = locator;
    p.model_id = model_id;
    p.concurrency = concurrency;
    p.retry_limit = 2;
    p.backoff = {0.0005, 2.0, 0.002};
    return p;
}

}  // namespace

TEST_CASE("render_blind_prompt: fixed system text, four sections, no provenance") {
    VariantMatrix matrix = small_matrix(2);
    std::string system_text;
    for (const auto& [variant, records] : matrix) {
        for (const auto& r : records) {
            RenderedPrompt p = render_blind_prompt(r);
            if (system_text.empty()) system_text = p.system_text;
            CHECK(p.system_text == system_text);  // byte-identical everywhere
            CHECK(p.user_text.find(prompts::kJavadocHeader) != std::string::npos);
            CHECK(p.user_text.find(prompts::kSignatureHeader) != std::string::npos);
            CHECK(p.user_text.find(prompts::kMutHeader) != std::string::npos);
            CHECK(p.user_text.find(prompts::kTestPrefixHeader) != std::string::npos);
            CHECK(scan_for_leaks(r, p.user_text).empty());
        }
    }
}

TEST_CASE("render_blind_prompt: contradiction cell carries no provenance strings") {
    VariantMatrix matrix = small_matrix(3);
    for (const auto& r : matrix[Variant::CONTRADICTION]) {
        RenderedPrompt p = render_blind_prompt(r);
        CHECK(p.user_text.find("CONTRADICTION") == std::string::npos);
        CHECK(p.user_text.find("HEAVY") == std::string::npos);
        CHECK(p.user_text.find("NORMAL") == std::string::npos);
        CHECK(p.user_text.find("SUBTLE") == std::string::npos);
        CHECK(p.user_text.find(r.ground_truth_summary) == std::string::npos);
    }
}

TEST_CASE("render_blind_prompt: base and doc-removed siblings differ only in Javadoc") {
    VariantMatrix matrix = small_matrix(1);
    RenderedPrompt base = render_blind_prompt(matrix[Variant::BASE][0]);
    RenderedPrompt removed = render_blind_prompt(matrix[Variant::DOC_RETURN_REMOVED][0]);

    auto base_sections = prompts::parse_user_prompt(base.user_text);
    auto removed_sections = prompts::parse_user_prompt(removed.user_text);
    REQUIRE(base_sections.has_value());
    REQUIRE(removed_sections.has_value());
    CHECK(base_sections->javadoc != removed_sections->javadoc);
    CHECK(base_sections->signature == removed_sections->signature);
    CHECK(base_sections->mut == removed_sections->mut);
    CHECK(base_sections->test_prefix == removed_sections->test_prefix);
}

TEST_CASE("render_blind_prompt: a planted leak aborts the cell") {
    VariantMatrix matrix = small_matrix(1);
    PerturbationRecord r = matrix[Variant::MUT_BUG][0];
    r.ground_truth_summary = "seed";  // appears verbatim in the artifacts
    try {
        render_blind_prompt(r);
        FAIL("expected LEAK_ABORT");
    } catch (const Error& e) {
        CHECK(e.code() == "LEAK_ABORT");
    }
}

TEST_CASE("prompt sections round-trip through parse_user_prompt") {
    ArtifactBundle b = fixtures::passing_bundle("roundtrip", 9);
    auto sections = prompts::parse_user_prompt(prompts::blind_user_prompt(b));
    REQUIRE(sections.has_value());
    CHECK(sections->javadoc == b.javadoc);
    CHECK(sections->signature == b.signature);
    CHECK(sections->mut == b.mut_body);
    CHECK(sections->test_prefix == b.test_prefix);
}

TEST_CASE("leak_scan_matrix: clean matrix has zero violations") {
    CHECK(leak_scan_matrix(small_matrix(4)).empty());
}

TEST_CASE("store: append, duplicate rejection, round-trip") {
    TempDir dir("store");
    TraceStore store(dir.path);
    ReasoningTrace t = fixtures::canonical_trace();
    PerturbationRecord prov = as_base_record(fixtures::passing_bundle("s0", 0));
    RunKey key{"model-a", Variant::BASE, prov.sample_id()};
    t.sample_id = prov.sample_id();
    t.model_id = key.model_id;

    store.append(key, t, prov);
    CHECK(store.contains(key));
    CHECK(store.size() == 1);
    try {
        store.append(key, t, prov);
        FAIL("expected DUPLICATE_KEY");
    } catch (const Error& e) {
        CHECK(e.code() == "DUPLICATE_KEY");
    }

    auto all = store.load_all();
    REQUIRE(all.size() == 1);
    CHECK(all[0].key == key);
    CHECK(all[0].trace == t);
    CHECK(all[0].provenance.sample_id() == prov.sample_id());
    CHECK(all[0].provenance.bundle == prov.bundle);
}

TEST_CASE("store: index is rebuilt across reopen") {
    TempDir dir("reopen");
    PerturbationRecord prov = as_base_record(fixtures::passing_bundle("s0", 0));
    RunKey key{"model-a", Variant::BASE, prov.sample_id()};
    {
        TraceStore store(dir.path);
        ReasoningTrace t = fixtures::canonical_trace();
        t.sample_id = prov.sample_id();
        store.append(key, t, prov);
    }
    TraceStore reopened(dir.path);
    CHECK(reopened.contains(key));
    CHECK(reopened.size() == 1);
}

TEST_CASE("store: torn trailing line is truncated and the key re-fetchable") {
    TempDir dir("torn");
    PerturbationRecord prov0 = as_base_record(fixtures::passing_bundle("s0", 0));
    PerturbationRecord prov1 = as_base_record(fixtures::passing_bundle("s1", 1));
    RunKey key0{"model-a", Variant::BASE, prov0.sample_id()};
    RunKey key1{"model-a", Variant::BASE, prov1.sample_id()};
    {
        TraceStore store(dir.path);
        ReasoningTrace t = fixtures::canonical_trace();
        t.sample_id = prov0.sample_id();
        store.append(key0, t, prov0);
        t.sample_id = prov1.sample_id();
        store.append(key1, t, prov1);
    }
    // simulate a crash mid-write: second record's line is cut in half
    auto traces = dir.path / "traces.jsonl";
    std::string content;
    {
        std::ifstream in(traces, std::ios::binary);
        content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    size_t first_nl = content.find('\n');
    std::string torn = content.substr(0, first_nl + 1 + (content.size() - first_nl) / 2);
    {
        std::ofstream out(traces, std::ios::binary | std::ios::trunc);
        out << torn;
    }

    TraceStore recovered(dir.path);
    CHECK(recovered.contains(key0));
    CHECK_FALSE(recovered.contains(key1));  // incomplete key reads as absent
    ReasoningTrace t = fixtures::canonical_trace();
    t.sample_id = prov1.sample_id();
    recovered.append(key1, t, prov1);  // re-fetch produces no duplicate
    CHECK(recovered.size() == 2);
    TraceStore verify(dir.path);
    CHECK(verify.size() == 2);
}

TEST_CASE("run_matrix: full run against the oracle auditor") {
    TempDir dir("run");
    VariantMatrix matrix = small_matrix(4);
    TraceStore store(dir.path);
    RunOptions opts;
    opts.sleeper = [](double) {};
    std::vector<EndpointProfile> profiles = {auditor_profile("oracle-1", "auditor:oracle")};

    RunSummary summary =
        run_matrix(profiles, matrix, store, opts, make_endpoint_factory(&matrix));
    CHECK(summary.attempted == 7 * 4);
    CHECK(summary.succeeded == 7 * 4);
    CHECK(summary.failed == 0);
    CHECK(store.size() == 7 * 4);
    CHECK(summary.prompt_hash == prompt_content_hash());

    // re-running is a no-op resume
    RunSummary again =
        run_matrix(profiles, matrix, store, opts, make_endpoint_factory(&matrix));
    CHECK(again.attempted == 0);
    CHECK(again.skipped == 7 * 4);
    CHECK(store.size() == 7 * 4);
}

TEST_CASE("run_matrix: limit caps cells per variant") {
    TempDir dir("limit");
    VariantMatrix matrix = small_matrix(5);
    TraceStore store(dir.path);
    RunOptions opts;
    opts.sleeper = [](double) {};
    opts.limit_per_variant = 2;
    std::vector<EndpointProfile> profiles = {auditor_profile("oracle-1", "auditor:oracle")};
    RunSummary summary =
        run_matrix(profiles, matrix, store, opts, make_endpoint_factory(&matrix));
    CHECK(summary.attempted == 7 * 2);
    CHECK(store.size() == 7 * 2);
}

namespace {

// Endpoint that tracks its peak concurrent in-flight requests.
class InstrumentedEndpoint : public ChatEndpoint {
public:
    explicit InstrumentedEndpoint(std::shared_ptr<ChatEndpoint> inner)
        : inner_(std::move(inner)) {}

    ChatResponse complete(const ChatRequest& request) override {
        int now = ++in_flight_;
        int peak = peak_.load();
        while (now > peak && !peak_.compare_exchange_weak(peak, now)) {}
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        ChatResponse out = inner_->complete(request);
        --in_flight_;
        ++calls_;
        return out;
    }

    int peak() const { return peak_.load(); }
    int calls() const { return calls_.load(); }

private:
    std::shared_ptr<ChatEndpoint> inner_;
    std::atomic<int> in_flight_{0};
    std::atomic<int> peak_{0};
    std::atomic<int> calls_{0};
};

// Endpoint that fails transiently the first k calls per cell.
class FlakyEndpoint : public ChatEndpoint {
public:
    FlakyEndpoint(std::shared_ptr<ChatEndpoint> inner, int failures_before_success)
        : inner_(std::move(inner)), failures_(failures_before_success) {}

    ChatResponse complete(const ChatRequest& request) override {
        std::lock_guard lock(mutex_);
        int& count = attempts_[fnv1a(request.user_text)];
        if (count++ < failures_)
            throw Error("TRANSIENT", "synthetic rate limit");
        return inner_->complete(request);
    }

private:
    std::shared_ptr<ChatEndpoint> inner_;
    int failures_;
    std::mutex mutex_;
    std::map<uint64_t, int> attempts_;
};

}  // namespace

TEST_CASE("run_matrix: in-flight requests never exceed the concurrency bound") {
    TempDir dir("bound");
    VariantMatrix matrix = small_matrix(6);
    TraceStore store(dir.path);
    RunOptions opts;
    opts.sleeper = [](double) {};

    auto instrumented = std::make_shared<InstrumentedEndpoint>(
        std::make_shared<AuditorEndpoint>(parse_auditor_locator("auditor:oracle"), matrix));
    EndpointProfile profile = auditor_profile("oracle-1", "auditor:oracle", 3);
    RunSummary summary = run_matrix(
        {profile}, matrix, store, opts,
        [&](const EndpointProfile&) -> std::shared_ptr<ChatEndpoint> { return instrumented; });

    CHECK(summary.succeeded == 7 * 6);
    CHECK(instrumented->peak() <= 3);
    CHECK(instrumented->peak() >= 2);  // parallelism actually happened
}

TEST_CASE("run_matrix: transient failures retry with backoff and recover fully") {
    TempDir dir("flaky");
    VariantMatrix matrix = small_matrix(3);
    TraceStore store(dir.path);
    size_t sleeps = 0;
    RunOptions opts;
    opts.sleeper = [&](double) { ++sleeps; };

    auto flaky = std::make_shared<FlakyEndpoint>(
        std::make_shared<AuditorEndpoint>(parse_auditor_locator("auditor:oracle"), matrix), 2);
    EndpointProfile profile = auditor_profile("oracle-1", "auditor:oracle", 2);
    profile.retry_limit = 5;
    RunSummary summary = run_matrix(
        {profile}, matrix, store, opts,
        [&](const EndpointProfile&) -> std::shared_ptr<ChatEndpoint> { return flaky; });

    CHECK(summary.succeeded == 7 * 3);
    CHECK(summary.failed == 0);
    CHECK(sleeps == 2u * 7u * 3u);  // two backoff sleeps per cell
}

TEST_CASE("run_matrix: permanent refusals are ledgered without retries") {
    TempDir dir("refusal");
    VariantMatrix matrix = small_matrix(2);
    TraceStore store(dir.path);
    RunOptions opts;
    opts.sleeper = [](double) {};

    struct RefusingEndpoint : ChatEndpoint {
        std::atomic<int> calls{0};
        ChatResponse complete(const ChatRequest&) override {
            ++calls;
            throw Error("PERMANENT_REFUSAL", "content filter rejection");
        }
    };
    auto refusing = std::make_shared<RefusingEndpoint>();
    EndpointProfile profile = auditor_profile("refuser", "auditor:oracle", 1);
    RunSummary summary = run_matrix(
        {profile}, matrix, store, opts,
        [&](const EndpointProfile&) -> std::shared_ptr<ChatEndpoint> { return refusing; });

    CHECK(summary.failed == 7 * 2);
    CHECK(refusing->calls.load() == 7 * 2);  // exactly one call per cell
    CHECK(store.failure_count() == 7 * 2);
    auto failures = store.load_failures();
    for (const auto& f : failures) CHECK(f.cause == "PERMANENT_REFUSAL");

    // ledgered cells are skipped on resume
    RunSummary again = run_matrix(
        {profile}, matrix, store, opts,
        [&](const EndpointProfile&) -> std::shared_ptr<ChatEndpoint> { return refusing; });
    CHECK(again.attempted == 0);
    CHECK(again.skipped == 7 * 2);
}

TEST_CASE("run_matrix: malformed completions exhaust retries into the ledger") {
    TempDir dir("garbage");
    VariantMatrix matrix = small_matrix(1);
    TraceStore store(dir.path);
    RunOptions opts;
    opts.sleeper = [](double) {};

    struct GarbageEndpoint : ChatEndpoint {
        ChatResponse complete(const ChatRequest&) override {
            return {"total nonsense, no object"};
        }
    };
    EndpointProfile profile = auditor_profile("garbage", "auditor:oracle", 1);
    profile.retry_limit = 1;
    RunSummary summary = run_matrix(
        {profile}, matrix, store, opts,
        [&](const EndpointProfile&) -> std::shared_ptr<ChatEndpoint> {
            return std::make_shared<GarbageEndpoint>();
        });
    CHECK(summary.failed == 7);
    for (const auto& f : store.load_failures()) CHECK(f.cause == "PARSE_FAILURE");
}

TEST_CASE("run_matrix: cancellation mid-run, then resume to exact completion") {
    TempDir dir("cancel");
    VariantMatrix matrix = small_matrix(20);  // 140 cells
    RunOptions opts;
    opts.sleeper = [](double) {};

    std::vector<EndpointProfile> profiles = {auditor_profile("oracle-1", "auditor:oracle", 2)};
    size_t stored_at_cancel = 0;
    {
        TraceStore store(dir.path);
        opts.cancel = [&]() { return store.size() >= 56; };  // ~40%
        RunSummary first =
            run_matrix(profiles, matrix, store, opts, make_endpoint_factory(&matrix));
        CHECK(first.cancelled);
        stored_at_cancel = store.size();
        CHECK(stored_at_cancel < 140);
    }
    // simulate the crash having torn the final line
    {
        auto traces = dir.path / "traces.jsonl";
        std::ofstream out(traces, std::ios::binary | std::ios::app);
        out << "{\"model_id\":\"oracle-1\",\"variant\":\"BASE\",\"sample";
    }

    TraceStore resumed_store(dir.path);
    RunOptions resume_opts;
    resume_opts.sleeper = [](double) {};
    RunSummary second = run_matrix(profiles, matrix, resumed_store, resume_opts,
                                   make_endpoint_factory(&matrix));
    CHECK_FALSE(second.cancelled);
    CHECK(resumed_store.size() == 140);
    CHECK(second.skipped >= stored_at_cancel);

    // zero duplicate keys in the persisted file
    auto rows = jsonl::read_file(dir.path / "traces.jsonl");
    std::set<std::string> keys;
    for (const auto& j : rows)
        keys.insert(j["model_id"].get<std::string>() + "|" + j["variant"].get<std::string>() +
                    "|" + j["sample_id"].get<std::string>());
    CHECK(rows.size() == 140);
    CHECK(keys.size() == 140);
}

TEST_CASE("endpoint profile invariants are enforced") {
    EndpointProfile p = auditor_profile("x", "auditor:oracle");
    p.temperature = 0.7;
    CHECK_THROWS_AS(p.check(), Error);
    p.temperature = 0.0;
    p.concurrency = 0;
    CHECK_THROWS_AS(p.check(), Error);
}

TEST_CASE("backoff schedule grows and caps") {
    BackoffSchedule b{30.0, 2.0, 300.0};
    CHECK(b.delay_for_attempt(0) == doctest::Approx(30.0));
    CHECK(b.delay_for_attempt(1) == doctest::Approx(60.0));
    CHECK(b.delay_for_attempt(2) == doctest::Approx(120.0));
    CHECK(b.delay_for_attempt(3) == doctest::Approx(240.0));
    CHECK(b.delay_for_attempt(4) == doctest::Approx(300.0));
    CHECK(b.delay_for_attempt(9) == doctest::Approx(300.0));
}

TEST_CASE("auditor served over HTTP is indistinguishable from in-process") {
    VariantMatrix matrix = small_matrix(1);
    auto auditor = std::make_shared<AuditorEndpoint>(parse_auditor_locator("auditor:oracle"),
                                                     matrix);
    httplib::Server server;
    bind_chat_route(server, auditor);
    int port = 18471;
    std::thread server_thread([&]() { server.listen("127.0.0.1", port); });
    server.wait_until_ready();

    HttpChatEndpoint http("http://127.0.0.1:" + std::to_string(port), "/v1/chat", "", 10.0);
    const PerturbationRecord& record = matrix[Variant::BASE][0];
    RenderedPrompt prompt = render_blind_prompt(record);
    ChatRequest request{"oracle-http", prompt.system_text, prompt.user_text, 0.0, 16384};

    std::string via_http = http.complete(request).content;
    std::string in_process = auditor->complete(request).content;
    CHECK(via_http == in_process);
    CHECK_FALSE(json::parse(via_http, nullptr, false).is_discarded());

    server.stop();
    server_thread.join();
}
