#include "sigloop/session_service.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "sigloop/hashing.hpp"

namespace sigloop {
namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";
constexpr std::string_view kFormatName = "sigloop-session";

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Json handle_to_json(const SessionHandle& h) {
  return {{"session_id", h.session_id}, {"created_at", h.created_at}, {"dataset", h.dataset}, {"iteration", h.iteration}};
}

Json state_view(const SessionState& state, const std::string& session_id) {
  const auto assignment = state.grouping.assignment();
  const auto& coords = state.embedding.coords;
  Json items = Json::array();
  for (std::size_t i = 0; i < state.item_count(); ++i) {
    const auto& item = state.dataset.items[i];
    const auto row = static_cast<Eigen::Index>(i);
    Json entry = {{"id", item.id},
                  {"x", coords.cols() > 0 ? coords(row, 0) : 0.0},
                  {"y", coords.cols() > 1 ? coords(row, 1) : 0.0},
                  {"group", assignment[i]}};
    if (item.label) entry["label"] = *item.label;
    if (item.media_uri) entry["media_uri"] = *item.media_uri;
    items.push_back(std::move(entry));
  }
  return {{"session_id", session_id},
          {"iteration", state.iteration()},
          {"dataset", state.dataset.descriptor.name},
          {"vocab_size", state.vocab.size()},
          {"group_count", state.grouping.groups.size()},
          {"stress", state.embedding.stress},
          {"metrics", metrics_to_json(state.metrics)},
          {"items", std::move(items)}};
}

Json record_to_json(const SessionRecord& r) {
  Json selections = Json::array();
  for (const auto& s : r.selections) selections.push_back(selection_to_json(s));
  return {{"format", kFormatName},
          {"version", kSessionFormatVersion},
          {"dataset", r.dataset_ref},
          {"config", config_to_json(r.config)},
          {"selections", std::move(selections)}};
}

SessionRecord record_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string{}) != kFormatName)
    throw Error(ErrorKind::UnsupportedVersion, "not a sigloop session file");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kSessionFormatVersion)
    throw Error(ErrorKind::UnsupportedVersion, "session format version " + (j.contains("version") ? j["version"].dump() : std::string("missing")) +
                                                   ", expected " + std::to_string(kSessionFormatVersion));
  SessionRecord r;
  if (!j.contains("dataset") || !j["dataset"].is_string()) throw Error(ErrorKind::DatasetMissing, "session has no dataset reference");
  r.dataset_ref = j["dataset"].get<std::string>();
  r.config = config_from_json(j.value("config", Json::object()));
  if (j.contains("selections")) {
    if (!j["selections"].is_array()) throw Error(ErrorKind::SelectionError, "selections must be an array");
    for (const auto& s : j["selections"]) r.selections.push_back(selection_from_json(s));
  }
  return r;
}

void write_session_file(const SessionRecord& record, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::NotFound, "cannot write " + path.string());
    out << record_to_json(record).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

SessionRecord read_session_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "session file not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::UnsupportedVersion, std::string("unreadable session file: ") + e.what());
  }
  return record_from_json(j);
}

Dataset resolve_dataset_ref(const std::string& ref) {
  if (ref.rfind(kBuiltinPrefix, 0) == 0) {
    const auto name = ref.substr(kBuiltinPrefix.size());
    if (auto ds = builtin_dataset(name)) return *std::move(ds);
    throw Error(ErrorKind::DatasetMissing, "unknown builtin dataset: " + name);
  }
  if (!std::filesystem::exists(ref)) throw Error(ErrorKind::DatasetMissing, "dataset file missing: " + ref);
  return load_dataset(ref);
}

SessionState replay_session_file(const std::filesystem::path& path) {
  const auto record = read_session_file(path);
  return replay_session(resolve_dataset_ref(record.dataset_ref), record.config, record.selections);
}

ServiceOptions ServiceOptions::from_environment() {
  ServiceOptions o;
  const char* dir = std::getenv("SIGLOOP_DATA_DIR");
  o.data_dir = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path("sigloop-data");
  return o;
}

SessionService::SessionService(ServiceOptions options)
    : options_(std::move(options)),
      instance_salt_(splitmix64(static_cast<std::uint64_t>(
          std::chrono::steady_clock::now().time_since_epoch().count()) ^
                                reinterpret_cast<std::uintptr_t>(this))) {}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::NotFound, "no session " + id);
  return it->second;
}

SessionHandle SessionService::register_state(SessionState state, std::string dataset_ref) {
  auto entry = std::make_shared<Entry>();
  entry->created_at = utc_timestamp();
  entry->dataset_ref = std::move(dataset_ref);
  entry->state = std::make_shared<const SessionState>(std::move(state));
  SessionHandle h;
  {
    std::unique_lock lock(registry_mutex_);
    entry->id = "s" + hex16(splitmix64(instance_salt_ ^ next_id_)).substr(0, 8) + "-" + std::to_string(next_id_);
    ++next_id_;
    sessions_.emplace(entry->id, entry);
  }
  return {entry->id, entry->created_at, entry->state->dataset.descriptor.name, entry->state->iteration()};
}

SessionHandle SessionService::create_session(Dataset dataset, const SessionConfig& config, std::string dataset_ref) {
  auto state = initialize_session(dataset, config);
  if (dataset_ref.empty()) {
    // Uploads are kept so saved sessions can be replayed later.
    std::filesystem::create_directories(options_.data_dir / "datasets");
    const auto digest = fnv1a64(to_json_text(dataset));
    const auto path = std::filesystem::absolute(options_.data_dir / "datasets" / (hex16(digest) + ".json"));
    if (!std::filesystem::exists(path)) save_dataset(dataset, path, DatasetFormat::json);
    dataset_ref = path.string();
  }
  return register_state(std::move(state), std::move(dataset_ref));
}

SessionHandle SessionService::create_builtin_session(const std::string& name, const SessionConfig& config) {
  auto ds = builtin_dataset(name);
  if (!ds) throw Error(ErrorKind::DatasetMissing, "unknown builtin dataset: " + name);
  return create_session(*std::move(ds), config, std::string(kBuiltinPrefix) + name);
}

std::shared_ptr<const SessionState> SessionService::snapshot(const std::string& id) const {
  const auto entry = find(id);
  std::lock_guard lock(entry->publish);
  return entry->state;
}

Json SessionService::get_state(const std::string& id) const { return state_view(*snapshot(id), id); }

Json SessionService::post_iteration(const std::string& id, const Selection& selection) {
  const auto entry = find(id);
  std::lock_guard writer(entry->writer);
  std::shared_ptr<const SessionState> current;
  {
    std::lock_guard lock(entry->publish);
    current = entry->state;
  }
  validate_selection(*current, selection);

  // The worker owns copies of everything it touches, so a timed-out
  // computation can finish in the background and be dropped.
  auto promise = std::make_shared<std::promise<SessionState>>();
  auto result = promise->get_future();
  std::thread([promise, current, selection] {
    try {
      promise->set_value(iterate(*current, selection));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
  }).detach();
  if (result.wait_for(options_.iteration_budget) != std::future_status::ready)
    throw Error(ErrorKind::IterationTimeout, "iteration exceeded " + std::to_string(options_.iteration_budget.count()) + " ms");

  auto next = std::make_shared<const SessionState>(result.get());
  {
    std::lock_guard lock(entry->publish);
    entry->state = next;
  }
  return state_view(*next, id);
}

Json SessionService::report(const std::string& id) const {
  const auto state = snapshot(id);
  Json j = history_to_json(*state);
  j["session_id"] = id;
  return j;
}

SessionHandle SessionService::handle(const std::string& id) const {
  const auto entry = find(id);
  std::lock_guard lock(entry->publish);
  return {entry->id, entry->created_at, entry->state->dataset.descriptor.name, entry->state->iteration()};
}

std::filesystem::path SessionService::save_session(const std::string& id,
                                                   std::optional<std::filesystem::path> path) const {
  const auto entry = find(id);
  std::shared_ptr<const SessionState> state;
  {
    std::lock_guard lock(entry->publish);
    state = entry->state;
  }
  SessionRecord record{entry->dataset_ref, state->config, {}};
  for (const auto& rec : state->history) record.selections.push_back(rec.selection);
  const auto target = path ? *path : options_.data_dir / (id + ".session.json");
  write_session_file(record, target);
  return target;
}

SessionHandle SessionService::load_session(const std::filesystem::path& path) {
  const auto record = read_session_file(path);
  auto state = replay_session(resolve_dataset_ref(record.dataset_ref), record.config, record.selections);
  return register_state(std::move(state), record.dataset_ref);
}

}  // namespace sigloop
