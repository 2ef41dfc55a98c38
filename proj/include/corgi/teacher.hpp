// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "corgi/types.hpp"

namespace corgi {

struct CompletionRequest {
  std::string system_message;  // empty: no system turn is sent
  std::string prompt;
  double temperature = 0.7;
  int max_tokens = 1024;
  std::string model;

  /// Throws std::invalid_argument on max_tokens <= 0 or temperature < 0.
  void check() const;
};

struct EmbeddingRequest {
  std::string text;
  std::string model;
};

/// Any generative model that answers a prompt. Implementations must be safe
/// to call from several threads at once.
class TeacherClient {
 public:
  virtual ~TeacherClient() = default;
  virtual std::string complete(const CompletionRequest& req) = 0;
  virtual std::string model_name() const = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// Unit-norm vector of the backend's dimension.
  virtual std::vector<double> embed(const EmbeddingRequest& req) = 0;
};

/// SHA-256 over system message, a NUL byte, then the prompt. Keys mock scripts.
std::string request_digest(std::string_view system_message, std::string_view prompt);

/// Scales to unit L2 norm in place; throws TeacherError on a zero vector.
void normalize(std::vector<double>& v);

// --- HTTP plumbing ---------------------------------------------------------

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws TeacherError(kind = transport) when no response was received.
  virtual HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                            const std::string& body) = 0;
};

/// cpp-httplib backed transport.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(120)) : timeout_(timeout) {}
  HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                    const std::string& body) override;

 private:
  std::chrono::seconds timeout_;
};

struct RetryPolicy {
  int max_retries = 5;
  std::chrono::milliseconds initial_delay{500};
  std::chrono::milliseconds max_delay{30'000};
  double multiplier = 2.0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

/// initial_delay * multiplier^attempt, capped at max_delay (attempt is 0-based).
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt);

bool is_retryable_status(int status);

/// Retries 408/429/5xx and transport failures with exponential backoff; a
/// Retry-After header (seconds) overrides the computed wait, capped at
/// max_delay. 401/403 fail immediately as authentication errors.
HttpResponse post_with_retry(HttpTransport& transport, const std::string& url,
                             const std::map<std::string, std::string>& headers, const std::string& body,
                             const RetryPolicy& policy, const Sleeper& sleep);

struct HttpEndpoint {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;   // sent as a bearer token when non-empty
  std::string model;
};

/// Chat-completion style endpoint: POST {base_url}/chat/completions.
class HttpTeacher : public TeacherClient {
 public:
  HttpTeacher(HttpEndpoint endpoint, std::shared_ptr<HttpTransport> transport, RetryPolicy policy = {},
              Sleeper sleep = real_sleeper());

  std::string complete(const CompletionRequest& req) override;
  std::string model_name() const override { return endpoint_.model; }

  /// Request body as sent on the wire; exposed for tests.
  static Json request_body(const CompletionRequest& req, const std::string& default_model);

 private:
  HttpEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy policy_;
  Sleeper sleep_;
};

/// Embedding endpoint: POST {base_url}/embeddings.
class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(HttpEndpoint endpoint, std::shared_ptr<HttpTransport> transport, RetryPolicy policy = {},
               Sleeper sleep = real_sleeper());
  std::vector<double> embed(const EmbeddingRequest& req) override;

 private:
  HttpEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy policy_;
  Sleeper sleep_;
};

/// Offline embedder: lowercased character trigrams, FNV-1a hashed into
/// `dimension` buckets, L2-normalised. Texts shorter than three bytes hash
/// as a single feature.
class ReferenceEmbedder : public Embedder {
 public:
  explicit ReferenceEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
  std::vector<double> embed(const EmbeddingRequest& req) override;
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_;
};

// --- relevance judging -----------------------------------------------------

/// First non-whitespace character 'A'/'a', or "yes" anywhere in the first
/// line (case-insensitive), means yes; everything else is no.
Vote parse_relevance_reply(std::string_view reply);

struct JudgeOptions {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 16;
};

Vote judge_relevance(TeacherClient& client, std::string_view question, std::string_view passage_title,
                     std::string_view passage, const JudgeOptions& opts = {});

}  // namespace corgi
