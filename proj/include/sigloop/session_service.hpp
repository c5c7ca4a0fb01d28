#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "sigloop/json_io.hpp"
#include "sigloop/learning_loop.hpp"

namespace sigloop {

inline constexpr int kSessionFormatVersion = 1;

struct SessionHandle {
  std::string session_id;
  std::string created_at;  // ISO-8601 UTC
  std::string dataset;
  int iteration = 0;
};

Json handle_to_json(const SessionHandle& handle);

// Client-facing projection of a session: 2-D coords (y = 0 for 1-D layouts),
// group ids, optional labels and media, current metrics.
Json state_view(const SessionState& state, const std::string& session_id);

// Persisted event log: dataset reference, config and selection history.
struct SessionRecord {
  std::string dataset_ref;  // "builtin:<name>" or a dataset file path
  SessionConfig config;
  std::vector<Selection> selections;
};

Json record_to_json(const SessionRecord& record);
SessionRecord record_from_json(const Json& j);
void write_session_file(const SessionRecord& record, const std::filesystem::path& path);
SessionRecord read_session_file(const std::filesystem::path& path);
// Resolves "builtin:<name>" or a file path; throws DatasetMissing.
Dataset resolve_dataset_ref(const std::string& ref);
// Reads, resolves and replays a persisted session.
SessionState replay_session_file(const std::filesystem::path& path);

struct ServiceOptions {
  // Where uploads and saved sessions go; SIGLOOP_DATA_DIR or ./sigloop-data.
  std::filesystem::path data_dir;
  std::chrono::milliseconds iteration_budget{60000};

  static ServiceOptions from_environment();
};

// Registry of live sessions. Reads take a snapshot pointer; each session has
// a single writer at a time, so readers never observe a half-applied iteration.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = ServiceOptions::from_environment());

  // `dataset_ref` names where the dataset can be reloaded from; when empty
  // the dataset is written into the data directory.
  SessionHandle create_session(Dataset dataset, const SessionConfig& config, std::string dataset_ref = {});
  SessionHandle create_builtin_session(const std::string& name, const SessionConfig& config);

  std::shared_ptr<const SessionState> snapshot(const std::string& session_id) const;
  Json get_state(const std::string& session_id) const;
  Json post_iteration(const std::string& session_id, const Selection& selection);
  Json report(const std::string& session_id) const;
  SessionHandle handle(const std::string& session_id) const;

  // Default path: <data_dir>/<session_id>.session.json
  std::filesystem::path save_session(const std::string& session_id,
                                     std::optional<std::filesystem::path> path = std::nullopt) const;
  SessionHandle load_session(const std::filesystem::path& path);

  const ServiceOptions& options() const noexcept { return options_; }

 private:
  struct Entry {
    std::string id;
    std::string created_at;
    std::string dataset_ref;
    mutable std::mutex writer;
    mutable std::mutex publish;
    std::shared_ptr<const SessionState> state;
  };

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  SessionHandle register_state(SessionState state, std::string dataset_ref);

  ServiceOptions options_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
  std::uint64_t instance_salt_;
};

}  // namespace sigloop
