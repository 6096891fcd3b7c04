#include <gtest/gtest.h>

#include <thread>

#include "coverpath/llm_client.hpp"

namespace coverpath {
namespace {

ChatRequest request(std::string text = "hi") {
  ChatRequest r;
  r.system_prompt = "sys";
  r.user_messages = {std::move(text)};
  return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(ScriptedOracle, ReplaysInOrderThenExhausts) {
  ScriptedOracle oracle({"bad", "good"});
  EXPECT_EQ(oracle.complete(request()).text, "bad");
  const ChatResponse second = oracle.complete(request());
  EXPECT_EQ(second.text, "good");
  EXPECT_DOUBLE_EQ(second.latency, 0.0);
  EXPECT_EQ(second.provider_meta.at("script_index"), "1");
  EXPECT_EQ(oracle.calls(), 2u);
  EXPECT_EQ(oracle.remaining(), 0u);
  EXPECT_EQ(code_of([&] { oracle.complete(request()); }), ErrorCode::ScriptExhausted);
}

TEST(ScriptedOracle, SingleResponse) {
  ScriptedOracle oracle({"0,0|0,1"});
  const ChatResponse r = oracle.complete(request());
  EXPECT_EQ(r.text, "0,0|0,1");
  EXPECT_DOUBLE_EQ(r.latency, 0.0);
  EXPECT_EQ(code_of([&] { oracle.complete(request()); }), ErrorCode::ScriptExhausted);
}

TEST(ScriptedOracle, EmptyScript) {
  EXPECT_EQ(code_of([] { ScriptedOracle o(std::vector<std::string>{}); }), ErrorCode::EmptyScript);
}

TEST(ScriptedOracle, IdenticalOraclesAreDeterministic) {
  ScriptedOracle a({"x", "y", "z"});
  ScriptedOracle b({"x", "y", "z"});
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.complete(request()).text, b.complete(request()).text);
}

TEST(ScriptedOracle, ConcurrentCallersSeeEachResponseOnce) {
  std::vector<std::string> script;
  for (int i = 0; i < 400; ++i) script.push_back(std::to_string(i));
  ScriptedOracle oracle(script);
  std::vector<std::vector<std::string>> got(4);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 4; ++t) {
      pool.emplace_back([&, t] {
        for (int i = 0; i < 100; ++i) got[t].push_back(oracle.complete(request()).text);
      });
    }
  }
  std::vector<std::string> all;
  for (const auto& g : got) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  std::sort(script.begin(), script.end());
  EXPECT_EQ(all, script);
}

TEST(Complete, ValidatesRequestAndDoesNotMutateIt) {
  ScriptedOracle oracle({"a", "b"});
  ChatRequest r = request();
  r.temperature = 2.5;
  EXPECT_EQ(code_of([&] { complete(oracle, r); }), ErrorCode::InvalidRequest);
  ChatRequest empty;
  EXPECT_EQ(code_of([&] { complete(oracle, empty); }), ErrorCode::InvalidRequest);
  const ChatRequest ok = request("keep me");
  const ChatRequest copy = ok;
  complete(oracle, ok);
  EXPECT_EQ(ok.user_messages, copy.user_messages);
  EXPECT_EQ(ok.system_prompt, copy.system_prompt);
  EXPECT_EQ(oracle.calls(), 1u);
}

TEST(ParseScript, RecordsSeparatedByDashLines) {
  EXPECT_EQ(parse_script("a\n---\nb\nc\n---\n"), (std::vector<std::string>{"a", "b\nc"}));
  EXPECT_EQ(parse_script("\nonly\n\n"), (std::vector<std::string>{"only"}));
  EXPECT_EQ(parse_script("x --- y\n"), (std::vector<std::string>{"x --- y"}));
  EXPECT_EQ(parse_script("a\r\n---\r\nb\r\n"), (std::vector<std::string>{"a", "b"}));
}

TEST(ParseScript, BundledFixtures) {
  const auto good = load_script_file(std::string(COVERPATH_DATA_DIR) + "/fixtures/good.txt");
  ASSERT_EQ(good.size(), 1u);
  EXPECT_EQ(good[0], "0,0|0,1|0,2|1,2|1,1|1,0|2,0|2,1|2,2");
  EXPECT_EQ(load_script_file(std::string(COVERPATH_DATA_DIR) + "/fixtures/all_bad.txt").size(), 5u);
  EXPECT_EQ(code_of([] { load_script_file("/nonexistent/script.txt"); }), ErrorCode::IoError);
}

TEST(RetryPolicy, ExponentialBackoff) {
  RetryPolicy p;
  EXPECT_DOUBLE_EQ(p.delay(0).count(), 1.0);
  EXPECT_DOUBLE_EQ(p.delay(1).count(), 2.0);
  EXPECT_DOUBLE_EQ(p.delay(2).count(), 4.0);
}

TEST(WithRetries, RetryableErrorsRetriedAtMostMaxRetries) {
  RetryPolicy p;
  p.max_retries = 3;
  std::vector<double> slept;
  Sleeper sleep = [&](std::chrono::duration<double> d) { slept.push_back(d.count()); };
  int calls = 0;
  EXPECT_EQ(code_of([&] {
              with_retries(p, sleep, [&]() -> int {
                ++calls;
                throw Error(ErrorCode::RateLimited, "slow down");
              });
            }),
            ErrorCode::RateLimited);
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(slept, (std::vector<double>{1.0, 2.0, 4.0}));

  calls = 0;
  const int v = with_retries(p, sleep, [&] {
    if (++calls < 3) throw Error(ErrorCode::NetworkError, "flaky");
    return 42;
  });
  EXPECT_EQ(v, 42);
  EXPECT_EQ(calls, 3);
}

TEST(WithRetries, NonRetryableErrorsPassThrough) {
  int calls = 0;
  EXPECT_EQ(code_of([&] {
              with_retries(RetryPolicy{}, nullptr, [&]() -> int {
                ++calls;
                throw Error(ErrorCode::AuthError, "bad key");
              });
            }),
            ErrorCode::AuthError);
  EXPECT_EQ(calls, 1);
}

TEST(ProviderKind, NamesRoundTrip) {
  for (ProviderKind k : {ProviderKind::OpenAI, ProviderKind::Gemini, ProviderKind::Anthropic, ProviderKind::Scripted}) {
    EXPECT_EQ(parse_provider_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_provider_kind("mystery").has_value());
  EXPECT_EQ(api_key_env_var(ProviderKind::OpenAI), "COVERPATH_OPENAI_KEY");
  EXPECT_EQ(api_key_env_var(ProviderKind::Gemini), "COVERPATH_GEMINI_KEY");
  EXPECT_EQ(api_key_env_var(ProviderKind::Anthropic), "COVERPATH_ANTHROPIC_KEY");
}

TEST(MakeProvider, ScriptedKind) {
  ProviderConfig pc;
  pc.kind = ProviderKind::Scripted;
  EXPECT_THROW(make_provider(pc), Error);
  pc.script = {"r1"};
  auto p = make_provider(pc);
  EXPECT_EQ(p->complete(request()).text, "r1");
}

TEST(TrimTrailing, OnlyTrailingWhitespace) {
  EXPECT_EQ(trim_trailing("  a b \n\t "), "  a b");
  EXPECT_EQ(trim_trailing(""), "");
}

}  // namespace
}  // namespace coverpath
