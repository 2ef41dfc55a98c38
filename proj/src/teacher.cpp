// SPDX-License-Identifier: Apache-2.0
#include "corgi/teacher.hpp"

#include <httplib.h>

#include <cmath>
#include <stdexcept>
#include <thread>

#include "corgi/digest.hpp"
#include "corgi/error.hpp"
#include "corgi/prompts.hpp"
#include "corgi/text.hpp"

namespace corgi {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TeacherError(TeacherError::Kind::transport, "bad URL: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string join_url(const std::string& base, std::string_view suffix) {
  std::string out = base;
  while (!out.empty() && out.back() == '/') out.pop_back();
  out += suffix;
  return out;
}

std::optional<std::chrono::milliseconds> retry_after(const HttpResponse& r) {
  for (const auto& [k, v] : r.headers) {
    if (to_lower(k) != "retry-after") continue;
    char* end = nullptr;
    double secs = std::strtod(v.c_str(), &end);
    if (end != v.c_str() && std::isfinite(secs) && secs >= 0) {
      return std::chrono::milliseconds(static_cast<long long>(secs * 1000.0));
    }
  }
  return std::nullopt;
}

std::map<std::string, std::string> json_headers(const std::string& api_key) {
  std::map<std::string, std::string> h{{"Content-Type", "application/json"}};
  if (!api_key.empty()) h["Authorization"] = "Bearer " + api_key;
  return h;
}

Json parse_body(const HttpResponse& r) {
  try {
    return Json::parse(r.body);
  } catch (const Json::parse_error& e) {
    throw TeacherError(TeacherError::Kind::bad_response, std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace

void CompletionRequest::check() const {
  if (max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
}

std::string request_digest(std::string_view system_message, std::string_view prompt) {
  std::string buf;
  buf.reserve(system_message.size() + prompt.size() + 1);
  buf.append(system_message);
  buf.push_back('\0');
  buf.append(prompt);
  return sha256_hex(buf);
}

void normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0) || !std::isfinite(sq)) throw TeacherError(TeacherError::Kind::bad_response, "zero or non-finite embedding");
  double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

HttpResponse HttplibTransport::post(const std::string& url, const std::map<std::string, std::string>& headers,
                                    const std::string& body) {
  auto [origin, path] = split_url(url);
  httplib::Client cli(origin);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  cli.set_write_timeout(timeout_);
  httplib::Headers h;
  std::string content_type = "application/json";
  for (const auto& [k, v] : headers) {
    if (to_lower(k) == "content-type") {
      content_type = v;
    } else {
      h.emplace(k, v);
    }
  }
  auto res = cli.Post(path, h, body, content_type);
  if (!res) {
    throw TeacherError(TeacherError::Kind::transport, "HTTP request to " + url + " failed: " + httplib::to_string(res.error()));
  }
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  for (const auto& [k, v] : res->headers) out.headers[k] = v;
  return out;
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) {
    if (d.count() > 0) std::this_thread::sleep_for(d);
  };
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt) {
  double ms = static_cast<double>(policy.initial_delay.count()) * std::pow(policy.multiplier, attempt);
  double cap = static_cast<double>(policy.max_delay.count());
  return std::chrono::milliseconds(static_cast<long long>(std::min(ms, cap)));
}

bool is_retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

HttpResponse post_with_retry(HttpTransport& transport, const std::string& url,
                             const std::map<std::string, std::string>& headers, const std::string& body,
                             const RetryPolicy& policy, const Sleeper& sleep) {
  std::string last_error;
  for (int attempt = 0;; ++attempt) {
    std::optional<std::chrono::milliseconds> hinted;
    try {
      HttpResponse r = transport.post(url, headers, body);
      if (r.status >= 200 && r.status < 300) return r;
      if (r.status == 401 || r.status == 403) {
        throw TeacherError(TeacherError::Kind::authentication,
                           "authentication failed (HTTP " + std::to_string(r.status) + ") for " + url);
      }
      if (!is_retryable_status(r.status)) {
        throw TeacherError(TeacherError::Kind::bad_response,
                           "HTTP " + std::to_string(r.status) + " from " + url + ": " + r.body.substr(0, 200));
      }
      last_error = "HTTP " + std::to_string(r.status);
      hinted = retry_after(r);
    } catch (const TeacherError& e) {
      if (e.kind() != TeacherError::Kind::transport) throw;
      last_error = e.what();
    }
    if (attempt >= policy.max_retries) {
      throw TeacherError(TeacherError::Kind::exhausted_retries,
                         "giving up on " + url + " after " + std::to_string(attempt + 1) + " attempts: " + last_error);
    }
    auto wait = hinted ? std::min(*hinted, policy.max_delay) : backoff_delay(policy, attempt);
    sleep(wait);
  }
}

HttpTeacher::HttpTeacher(HttpEndpoint endpoint, std::shared_ptr<HttpTransport> transport, RetryPolicy policy,
                         Sleeper sleep)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)), policy_(policy), sleep_(std::move(sleep)) {}

Json HttpTeacher::request_body(const CompletionRequest& req, const std::string& default_model) {
  Json messages = Json::array();
  if (!req.system_message.empty()) messages.push_back({{"role", "system"}, {"content", req.system_message}});
  messages.push_back({{"role", "user"}, {"content", req.prompt}});
  return Json{{"model", req.model.empty() ? default_model : req.model},
              {"messages", std::move(messages)},
              {"temperature", req.temperature},
              {"max_tokens", req.max_tokens}};
}

std::string HttpTeacher::complete(const CompletionRequest& req) {
  req.check();
  std::string url = join_url(endpoint_.base_url, "/chat/completions");
  HttpResponse r = post_with_retry(*transport_, url, json_headers(endpoint_.api_key),
                                   request_body(req, endpoint_.model).dump(), policy_, sleep_);
  Json j = parse_body(r);
  try {
    const Json& choice = j.at("choices").at(0);
    std::string finish = choice.value("finish_reason", std::string());
    if (finish == "length") {
      throw TeacherError(TeacherError::Kind::truncated, "completion truncated at max_tokens=" + std::to_string(req.max_tokens));
    }
    const Json& content = choice.at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string();
  } catch (const Json::exception& e) {
    throw TeacherError(TeacherError::Kind::bad_response, std::string("unexpected completion payload: ") + e.what());
  }
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::shared_ptr<HttpTransport> transport, RetryPolicy policy,
                           Sleeper sleep)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)), policy_(policy), sleep_(std::move(sleep)) {}

std::vector<double> HttpEmbedder::embed(const EmbeddingRequest& req) {
  if (trim(req.text).empty()) throw std::invalid_argument("embedding text is empty");
  std::string url = join_url(endpoint_.base_url, "/embeddings");
  Json body{{"model", req.model.empty() ? endpoint_.model : req.model}, {"input", req.text}};
  HttpResponse r = post_with_retry(*transport_, url, json_headers(endpoint_.api_key), body.dump(), policy_, sleep_);
  Json j = parse_body(r);
  std::vector<double> v;
  try {
    for (const auto& x : j.at("data").at(0).at("embedding")) v.push_back(x.get<double>());
  } catch (const Json::exception& e) {
    throw TeacherError(TeacherError::Kind::bad_response, std::string("unexpected embedding payload: ") + e.what());
  }
  normalize(v);
  return v;
}

std::vector<double> ReferenceEmbedder::embed(const EmbeddingRequest& req) {
  if (trim(req.text).empty()) throw std::invalid_argument("embedding text is empty");
  std::string text = to_lower(req.text);
  std::vector<double> v(dimension_, 0.0);
  if (text.size() < 3) {
    v[fnv1a64(text) % dimension_] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
      v[fnv1a64(std::string_view(text).substr(i, 3)) % dimension_] += 1.0;
    }
  }
  normalize(v);
  return v;
}

Vote parse_relevance_reply(std::string_view reply) {
  std::string_view t = trim(reply);
  if (!t.empty() && (t.front() == 'A' || t.front() == 'a')) return Vote::yes;
  std::string_view first_line = t.substr(0, t.find('\n'));
  return icontains(first_line, "yes") ? Vote::yes : Vote::no;
}

Vote judge_relevance(TeacherClient& client, std::string_view question, std::string_view passage_title,
                     std::string_view passage, const JudgeOptions& opts) {
  CompletionRequest req;
  req.prompt = build_retrieval_check_prompt(question, passage_title, passage);
  req.temperature = opts.temperature;
  req.max_tokens = opts.max_tokens;
  req.model = opts.model;
  return parse_relevance_reply(client.complete(req));
}

}  // namespace corgi
