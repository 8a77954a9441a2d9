// Copyright 2026 The stratsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stratsat/provider.hpp"

#include <cstdlib>

#include "httplib.h"
#include "stratsat/action.hpp"
#include "stratsat/sexpr.hpp"

namespace stratsat {

std::string_view to_string(ProviderCall c) {
  switch (c) {
    case ProviderCall::ChooseAction: return "choose-action";
    case ProviderCall::ProposeStrategy: return "propose-strategy";
    case ProviderCall::ProposeHints: return "propose-hints";
    case ProviderCall::ProposeTags: return "propose-tags";
  }
  return "?";
}

ScriptedProvider ScriptedProvider::parse(std::string_view script) {
  ScriptedProvider p;
  for (const auto &entry : parse_sexprs(script)) {
    if (!entry.is_list() || entry.items.empty() || !entry.items[0].is_atom()) {
      throw Error(ErrorKind::ParseError, "expected (<call> <response>...)", entry.where);
    }
    std::optional<ProviderCall> call;
    for (auto c : {ProviderCall::ChooseAction, ProviderCall::ProposeStrategy, ProviderCall::ProposeHints,
                   ProviderCall::ProposeTags}) {
      if (entry.items[0].text == to_string(c)) call = c;
    }
    if (!call) throw Error(ErrorKind::ParseError, "unknown provider call '" + entry.items[0].text + "'", entry.where);
    std::string response;
    if (entry.items.size() == 2 && entry.items[1].is_string()) {
      response = entry.items[1].text;
    } else {
      for (std::size_t i = 1; i < entry.items.size(); ++i) {
        if (i > 1) response += '\n';
        response += to_string(entry.items[i]);
      }
    }
    p.queues_[*call].push_back(std::move(response));
  }
  return p;
}

std::string ScriptedProvider::next(ProviderCall c) {
  auto &q = queues_[c];
  if (q.empty()) throw Error(ErrorKind::ProviderFailure, "script has no " + std::string(to_string(c)) + " response left");
  std::string out = std::move(q.front());
  q.pop_front();
  return out;
}

std::size_t ScriptedProvider::remaining(ProviderCall c) const {
  auto it = queues_.find(c);
  return it == queues_.end() ? 0 : it->second.size();
}

std::string ScriptedProvider::propose_strategy(const std::string &) { return next(ProviderCall::ProposeStrategy); }
std::string ScriptedProvider::propose_tags(const std::vector<std::string> &) { return next(ProviderCall::ProposeTags); }
std::string ScriptedProvider::propose_hints(const std::string &) { return next(ProviderCall::ProposeHints); }
std::string ScriptedProvider::choose_action(const std::string &, const std::vector<std::string> &) {
  return next(ProviderCall::ChooseAction);
}

std::string check_response(ProviderCall call, std::string_view text) {
  try {
    switch (call) {
      case ProviderCall::ChooseAction:
        (void)parse_action(text);
        break;
      case ProviderCall::ProposeStrategy:
        (void)parse_strategy(text);
        break;
      case ProviderCall::ProposeHints:
        for (const auto &f : parse_sexprs(text)) (void)hint_from_sexpr(f);
        break;
      case ProviderCall::ProposeTags:
        for (const auto &f : parse_sexprs(text)) {
          if (!f.is_form("tag") || f.items.size() != 3) return "expected (tag <rule> <tag>) forms";
          (void)expect_atom(f.items[1], "rule");
          (void)expect_atom(f.items[2], "tag");
        }
        break;
    }
  } catch (const Error &e) {
    return e.what();
  }
  return {};
}

HttpProvider::HttpProvider(HttpProviderConfig config, ResponseCheck check)
    : config_(std::move(config)), check_(std::move(check)) {
  const auto &url = config_.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorKind::InvalidArgument, "provider endpoint must be an http:// URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::string HttpProvider::post(const std::string &body) {
  httplib::Client client(scheme_host_);
  auto secs = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  httplib::Headers headers{{"X-Model", config_.model}};
  if (!config_.key_env.empty()) {
    if (const char *key = std::getenv(config_.key_env.c_str())) headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path_, headers, body, "text/plain");
  if (!res) throw Error(ErrorKind::ProviderFailure, "request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw Error(ErrorKind::ProviderFailure, "provider replied with HTTP " + std::to_string(res->status));
  return res->body;
}

std::string HttpProvider::call(ProviderCall c, const std::string &prompt) {
  std::string head = "call: " + std::string(to_string(c)) + "\nmodel: " + config_.model + "\n\n";
  std::string reply = post(head + prompt);
  std::string diag = check_(c, reply);
  if (diag.empty()) return reply;
  std::string repair = head + prompt + "\n\nThe previous reply was rejected: " + diag + "\nPrevious reply:\n" + reply +
                       "\nReply again using only the required grammar.";
  reply = post(repair);
  diag = check_(c, reply);
  if (!diag.empty()) throw Error(ErrorKind::ProviderFailure, "reply failed the grammar check after repair: " + diag);
  return reply;
}

std::string HttpProvider::propose_strategy(const std::string &digest) {
  return call(ProviderCall::ProposeStrategy, digest + "\nReply with one (strategy ...) form.");
}

std::string HttpProvider::propose_tags(const std::vector<std::string> &rules) {
  std::string prompt = "rules:\n";
  for (const auto &r : rules) prompt += r + '\n';
  return call(ProviderCall::ProposeTags, prompt + "Reply with one (tag <rule> <tag>) form per rule.");
}

std::string HttpProvider::propose_hints(const std::string &phase_context) {
  return call(ProviderCall::ProposeHints, phase_context + "\nReply with (pref <pattern> prune <pattern>) forms.");
}

std::string HttpProvider::choose_action(const std::string &state_digest, const std::vector<std::string> &legal) {
  std::string prompt = state_digest + "\nlegal actions:\n";
  for (const auto &a : legal) prompt += a + '\n';
  return call(ProviderCall::ChooseAction, prompt + "Reply with exactly one action form.");
}

}  // namespace stratsat
