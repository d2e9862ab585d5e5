#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "hwmon/engine.hpp"

namespace hwmon {

namespace {

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::int64_t a, b, c;
};

struct EventAfter {
  bool operator()(const Event& x, const Event& y) const {
    return x.time != y.time ? x.time > y.time : x.seq > y.seq;
  }
};

// Typical background levels; each report scatters log-normally around them.
constexpr std::array<double, kPollutantCount> kBaseLevel = {15.0, 60.0, 1.5, 0.045, 40.0, 15.0};
constexpr double kLevelSpread = 0.4;

struct Hop {
  std::int64_t target = -1;  // sensor id, -1 at the sink
  int hops = 1;
  double dist = 0.0;
};

struct SubareaWsn {
  ClusterForest forest;
  NodeId sink = 0;
  bool lane_capable = false;
  std::map<NodeId, std::vector<NodeId>> next_hops;  // per non-sink head, in round-robin order
  std::map<NodeId, Hop> fallback;                   // per non-sink head without a next hop
};

// Where a sub-area's RN sends its batch when it does not use a vehicle.
struct Leg {
  bool to_rsu = true;
  int target = 0;  // RSU index or sub-area index
  double dist = 0.0;
  int hops = 1;
};

struct Chain {
  std::vector<Leg> legs;
  std::vector<int> inbound;
};

struct Gather {
  std::vector<Hop> route;
  std::vector<int> pending;
  std::vector<int> count;
  int open = 0;
};

struct Merge {
  int pending = 0;
  MeasurementBatch batch;
};

struct RnState {
  std::deque<MeasurementBatch> pending;
  std::vector<AdmMsg> adm;
  bool adv_active = false;
  double busy_until = 0.0;
  double last_adv = 0.0;
  int adv_period = 0;
};

struct VehicleExtra {
  std::vector<TaskId> held;
  double queued_cycles = 0.0;
  bool retired = false;
  int terminal_rsu = 0;
};

struct PeriodState {
  double start = 0.0;
  std::vector<char> done;
  int delivered = 0;
  double last = 0.0;
};

class Simulation {
 public:
  Simulation(const World& world, double duration, Mode mode, const RunOptions& opt)
      : w_(world),
        cfg_(w_.config),
        mode_(mode),
        opt_(opt),
        duration_(duration),
        readings_(cfg_.seed, Stream::Readings),
        protocol_(cfg_.seed, Stream::Protocol),
        ledger_(w_.sensors.size(), cfg_.clustering.initial_energy_j),
        profile_(aqi_profile(cfg_)),
        wsn_(w_.subareas.size()),
        rn_(w_.subareas.size()) {
    res_.mode = mode;
    res_.seed = cfg_.seed;
    for (const auto& v : w_.vehicles) extra(v.id);
  }

  RunResult run() {
    if (!(duration_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "run duration must be positive");
    check_structure();
    for (int p = 0; p * cfg_.sensing_period_s < duration_; ++p) {
      periods_.push_back({p * cfg_.sensing_period_s, std::vector<char>(w_.subareas.size(), 0), 0, 0.0});
      schedule(periods_.back().start, EventKind::SenseTick, p);
    }
    if (mode_ == Mode::Combined) {
      schedule(0.0, EventKind::ReclusterTick);
      schedule(0.0, EventKind::FaTick);
      schedule(cfg_.mobility_dt_s, EventKind::MobilityTick);
    }
    const double horizon = duration_ + cfg_.drain_s;
    while (!q_.empty() && q_.top().time <= horizon) {
      const Event e = q_.top();
      q_.pop();
      now_ = e.time;
      ++res_.counters.events_processed;
      dispatch(e);
    }
    finish();
    return std::move(res_);
  }

 private:
  // ---------------------------------------------------------------- plumbing

  void schedule(double t, EventKind k, std::int64_t a = 0, std::int64_t b = 0, std::int64_t c = 0) {
    q_.push({t, seq_++, k, a, b, c});
  }

  void log(ActorKind actor, std::int64_t id, LogEvent ev, int period, std::int64_t detail = -1,
           std::optional<TaskId> task = std::nullopt) {
    if (!opt_.record_log) return;
    res_.log.push_back({now_, actor, id, ev, task, period, detail});
  }

  void debit(NodeId n, double joules, EnergyCategory c) { ledger_.debit(n, joules, c, now_); }

  double hop_time(double bits) const { return bits / cfg_.radio.bitrate_bps + cfg_.radio.per_hop_latency_s; }
  double v2v_time(double bits) const { return bits / cfg_.radio.v2v_bitrate_bps + cfg_.radio.per_hop_latency_s; }
  double range() const { return cfg_.clustering.range_m; }
  static int hops_for(double d, double r) { return std::max(1, static_cast<int>(std::ceil(d / r - 1e-12))); }

  VehicleExtra& extra(VehicleId id) {
    if (extras_.size() <= id) extras_.resize(id + 1);
    return extras_[id];
  }

  Vehicle* find_vehicle(VehicleId id) {
    auto it = std::lower_bound(w_.vehicles.begin(), w_.vehicles.end(), id,
                               [](const Vehicle& v, VehicleId x) { return v.id < x; });
    if (it != w_.vehicles.end() && it->id == id) return &*it;
    const auto r = retired_.find(id);
    return r == retired_.end() ? nullptr : &r->second;
  }

  Vehicle& vehicle(VehicleId id) {
    auto* v = find_vehicle(id);
    if (!v) throw Error(ErrorCode::Corrupt, "unknown vehicle " + std::to_string(id));
    return *v;
  }

  bool outstanding() const {
    for (const auto& p : periods_)
      if (p.delivered < static_cast<int>(w_.subareas.size())) return true;
    return false;
  }

  bool keep_ticking() const { return now_ < duration_ || outstanding(); }

  void dispatch(const Event& e) {
    switch (e.kind) {
      case EventKind::SenseTick: on_sense(static_cast<int>(e.a)); break;
      case EventKind::WsnHop: on_wsn_hop(static_cast<int>(e.a), static_cast<NodeId>(e.b), static_cast<int>(e.c)); break;
      case EventKind::RnTick: on_assign(static_cast<int>(e.a)); break;
      case EventKind::AdvTick: on_adv(static_cast<int>(e.a)); break;
      case EventKind::AdmArrive: on_adm(static_cast<int>(e.a), static_cast<VehicleId>(e.b), static_cast<int>(e.c)); break;
      case EventKind::Contact: on_contact(static_cast<std::size_t>(e.a), static_cast<VehicleId>(e.b), static_cast<int>(e.c)); break;
      case EventKind::TaskArrive: on_task_arrive(static_cast<TaskId>(e.a)); break;
      case EventKind::TaskDone: on_task_done(static_cast<TaskId>(e.a)); break;
      case EventKind::ResultArrive: hold(static_cast<VehicleId>(e.b), static_cast<TaskId>(e.a)); break;
      case EventKind::Delivery: record_result(static_cast<TaskId>(e.a)); break;
      case EventKind::MecDone: on_mec_done(static_cast<TaskId>(e.a)); break;
      case EventKind::RelayArrive: on_relay_arrive(static_cast<std::size_t>(e.a), e.b != 0, static_cast<int>(e.c)); break;
      case EventKind::MobilityTick: on_mobility(); break;
      case EventKind::ReclusterTick: on_recluster(); break;
      case EventKind::FaTick: on_fa(); break;
    }
  }

  // ---------------------------------------------------------------- WSN side

  void check_structure() {
    for (const auto& n : w_.sensors) {
      int hits = 0;
      for (int s : {n.subarea - 2, n.subarea, n.subarea + 2})
        if (s >= 0 && s < static_cast<int>(w_.subareas.size()) && w_.subareas[s].contains(n.pos)) ++hits;
      if (hits != 1) problem(res_.audit.structure_ok, "sensor " + std::to_string(n.id) + " lies in " +
                                                           std::to_string(hits) + " sub-areas");
    }
  }

  void problem(bool& flag, std::string msg) {
    flag = false;
    if (res_.audit.problems.size() < 50) res_.audit.problems.push_back(std::move(msg));
  }

  std::span<SensorNode> nodes_of(const Subarea& s) {
    return std::span<SensorNode>(w_.sensors).subspan(s.first_sensor, static_cast<std::size_t>(s.sensor_count));
  }

  bool reaches_lane(Position p) const {
    for (auto d : {Direction::Eastbound, Direction::Westbound})
      for (int l = 0; l < cfg_.lanes_per_direction; ++l)
        if (std::abs(p.y - lane_y(cfg_, d, l)) <= range()) return true;
    return false;
  }

  void reform(int period) {
    const double half = road_half_width_m(cfg_);
    const double adv_bits = cfg_.radio.adv_packet_bits;
    std::size_t heads = 0;
    for (const auto& s : w_.subareas) {
      auto nodes = nodes_of(s);
      for (auto& n : nodes) n.remaining_energy_j = ledger_.remaining(n.id);
      const Position bs = w_.vbps[s.vbp].pos;
      auto& st = wsn_[s.index];
      st = SubareaWsn{};
      st.forest = form_clusters(nodes, bs, cfg_.clustering);
      apply_forest(nodes, st.forest);
      st.forest.rendezvous = select_rendezvous(nodes, st.forest, half, range());
      if (st.forest.rendezvous.empty()) {
        problem(res_.audit.structure_ok, "sub-area " + std::to_string(s.index) + " has no rendezvous node");
        continue;
      }
      heads += st.forest.heads.size();
      st.sink = *st.forest.rendezvous.begin();
      const Position sink = w_.sensors[st.sink].pos;
      st.lane_capable = reaches_lane(sink);

      for (auto& n : nodes) {
        debit(n.id, tx_energy_j(range(), adv_bits, cfg_.clustering, cfg_.radio), EnergyCategory::Tx);
        if (n.parent) {
          debit(n.id, tx_energy_j(distance(n.pos, w_.sensors[*n.parent].pos), adv_bits, cfg_.clustering, cfg_.radio),
                EnergyCategory::Tx);
          debit(*n.parent, rx_energy_j(adv_bits, cfg_.radio), EnergyCategory::Rx);
        }
      }

      // Head-to-head forwarding: only toward clusters whose head is strictly
      // nearer the sink, which keeps the gather graph acyclic.
      std::vector<NodeId> head_list(st.forest.heads.begin(), st.forest.heads.end());
      for (NodeId c : head_list) {
        if (c == st.sink) continue;
        const double own = distance(w_.sensors[c].pos, sink);
        std::vector<NodeId> valid;
        for (NodeId h : inter_cluster_candidates(w_.sensors[c], nodes, bs, cfg_.clustering, st.forest))
          if (distance(w_.sensors[st.forest.head_of.at(h)].pos, sink) < own) valid.push_back(h);
        if (!valid.empty()) {
          st.next_hops[c] = std::move(valid);
          continue;
        }
        Hop best;
        double best_d = std::numeric_limits<double>::infinity();
        for (NodeId o : head_list) {
          if (!(distance(w_.sensors[o].pos, sink) < own)) continue;
          const double d = distance(w_.sensors[c].pos, w_.sensors[o].pos);
          if (d < best_d) {
            best_d = d;
            best.target = o;
          }
        }
        best.dist = best_d;
        best.hops = hops_for(best_d, range());
        st.fallback[c] = best;
      }
    }
    build_chain();
    log(ActorKind::Sim, 0, LogEvent::Reform, period, static_cast<std::int64_t>(heads));
  }

  // RN-to-RN relay toward the nearest RSU, on the same side of the road.
  void build_chain() {
    chain_.legs.assign(w_.subareas.size(), Leg{});
    chain_.inbound.assign(w_.subareas.size(), 0);
    for (const auto& s : w_.subareas) {
      const Position from = w_.sensors[wsn_[s.index].sink].pos;
      const int k = nearest_rsu(w_, from);
      const double xr = w_.rsus[k].x;
      int best = -1;
      for (const auto& t : w_.subareas) {
        if (t.side != s.side || t.index == s.index) continue;
        const double xt = w_.sensors[wsn_[t.index].sink].pos.x;
        if (!(std::min(from.x, xr) < xt && xt < std::max(from.x, xr))) continue;
        if (best < 0 || std::abs(xt - from.x) < std::abs(w_.sensors[wsn_[best].sink].pos.x - from.x)) best = t.index;
      }
      Leg leg;
      if (best >= 0) {
        leg.to_rsu = false;
        leg.target = best;
        leg.dist = distance(from, w_.sensors[wsn_[best].sink].pos);
        ++chain_.inbound[best];
      } else {
        leg.target = k;
        leg.dist = distance(from, w_.rsus[k]);
      }
      leg.hops = hops_for(leg.dist, range());
      chain_.legs[s.index] = leg;
    }
  }

  void on_sense(int p) {
    log(ActorKind::Sim, 0, LogEvent::Sense, p);
    if (p % cfg_.reformation_factor == 0) reform(p);
    chains_[p] = chain_;
    for (const auto& n : w_.sensors) debit(n.id, sleep_energy_j(cfg_.sensing_period_s), EnergyCategory::Sleep);

    auto& samples = samples_[p];
    samples.resize(w_.subareas.size());
    for (const auto& s : w_.subareas) {
      std::array<std::vector<double>, kPollutantCount> values;
      for (int i = 0; i < s.sensor_count; ++i)
        for (int k = 0; k < kPollutantCount; ++k)
          values[k].push_back(kBaseLevel[k] * std::exp(readings_.normal(0.0, kLevelSpread)));
      auto& sample = samples[s.index];
      sample.subarea = s.index;
      sample.sensor_count = s.sensor_count;
      const Position where{w_.vbps[s.vbp].pos.x, s.side * (s.lateral_lo + s.lateral_hi) / 2.0};
      for (int k = 0; k < kPollutantCount; ++k) {
        auto& v = values[k];
        std::sort(v.begin(), v.end());
        double sum = 0.0;
        for (double x : v) sum += x;
        sample.readings.push_back({static_cast<Pollutant>(k), sum / static_cast<double>(v.size()), now_, where});
      }
    }

    std::erase_if(gathers_, [](const auto& kv) { return kv.second.open == 0; });
    auto& g = gathers_[p];
    const std::size_t n = w_.sensors.size();
    g.route.assign(n, Hop{});
    g.pending.assign(n, 0);
    g.count.assign(n, 1);
    g.open = static_cast<int>(w_.subareas.size());
    for (const auto& s : w_.subareas) {
      auto& st = wsn_[s.index];
      for (auto& node : nodes_of(s)) {
        Hop h;
        if (node.id == st.sink) {
          h.target = -1;
        } else if (node.parent) {
          h.target = *node.parent;
          h.dist = distance(node.pos, w_.sensors[*node.parent].pos);
        } else if (const auto it = st.next_hops.find(node.id); it != st.next_hops.end()) {
          const auto& c = it->second;
          const NodeId next = c[node.rr_cursor++ % c.size()];
          h.target = next;
          h.dist = distance(node.pos, w_.sensors[next].pos);
        } else {
          h = st.fallback.at(node.id);
        }
        g.route[node.id] = h;
        if (h.target >= 0) ++g.pending[h.target];
      }
    }
    for (const auto& s : w_.subareas)
      for (const auto& node : nodes_of(s))
        if (g.pending[node.id] == 0) {
          if (g.route[node.id].target < 0)
            gather_done(p, s.index);
          else
            wsn_send(p, node.id);
        }
  }

  void wsn_send(int p, NodeId from) {
    auto& g = gathers_.at(p);
    const auto& h = g.route[from];
    const double bits = g.count[from] * cfg_.radio.sensor_packet_bits;
    debit(from, h.hops * tx_energy_j(h.dist / h.hops, bits, cfg_.clustering, cfg_.radio), EnergyCategory::Tx);
    schedule(now_ + h.hops * hop_time(bits), EventKind::WsnHop, p, h.target, g.count[from]);
  }

  void on_wsn_hop(int p, NodeId to, int readings) {
    auto& g = gathers_.at(p);
    debit(to, rx_energy_j(readings * cfg_.radio.sensor_packet_bits, cfg_.radio), EnergyCategory::Rx);
    g.count[to] += readings;
    if (--g.pending[to] > 0) return;
    if (g.route[to].target < 0)
      gather_done(p, w_.sensors[to].subarea);
    else
      wsn_send(p, to);
  }

  void gather_done(int p, int s) {
    const NodeId sink = wsn_[s].sink;
    log(ActorKind::Rendezvous, sink, LogEvent::GatherDone, p, s);
    --gathers_.at(p).open;
    MeasurementBatch b;
    b.period_index = p;
    b.samples.push_back(std::move(samples_.at(p)[s]));
    produced_.insert({p, s});
    ++res_.counters.batches;
    if (mode_ == Mode::WsnOnly) {
      merge_at(s, std::move(b));
      return;
    }
    const auto action = rn_tick(w_.sensors[sink], b, w_.rsus, range());
    if (action == RnAction::DirectToRsu) {
      const Position at = w_.sensors[sink].pos;
      const int k = nearest_rsu(w_, at);
      send_leg(s, std::move(b), Leg{true, k, distance(at, w_.rsus[k]), 1});
    } else if (action == RnAction::Broadcast) {
      rn_accept(s, std::move(b));
    }
  }

  // Combined mode: queue for vehicles when the RN can hear a lane, relay otherwise.
  void rn_accept(int s, MeasurementBatch b) {
    if (!wsn_[s].lane_capable) {
      const Leg leg = chains_.at(b.period_index).legs[s];
      send_leg(s, std::move(b), leg);
      return;
    }
    auto& st = rn_[s];
    const auto pos = std::upper_bound(st.pending.begin(), st.pending.end(), b.period_index,
                                      [](int p, const MeasurementBatch& x) { return p < x.period_index; });
    st.pending.insert(pos, std::move(b));
    if (!st.adv_active) {
      st.adv_active = true;
      schedule(now_, EventKind::AdvTick, s);
    }
  }

  // WSN-only mode: an RN forwards once its own batch and every upstream batch are in.
  void merge_at(int s, MeasurementBatch b) {
    const int p = b.period_index;
    auto [it, fresh] = merges_.try_emplace({p, s});
    auto& m = it->second;
    if (fresh) {
      m.pending = chains_.at(p).inbound[s] + 1;
      m.batch.period_index = p;
    }
    for (auto& x : b.samples) m.batch.samples.push_back(std::move(x));
    if (--m.pending > 0) return;
    auto out = std::move(m.batch);
    merges_.erase(it);
    send_leg(s, std::move(out), chains_.at(p).legs[s]);
  }

  void send_leg(int s, MeasurementBatch b, const Leg& leg) {
    const NodeId sink = wsn_[s].sink;
    const double bits = b.sensor_count() * cfg_.radio.sensor_packet_bits;
    debit(sink, leg.hops * tx_energy_j(leg.dist / leg.hops, bits, cfg_.clustering, cfg_.radio), EnergyCategory::Tx);
    const bool direct = leg.to_rsu && leg.hops == 1;
    log(ActorKind::Rendezvous, sink, direct ? LogEvent::DirectToRsu : LogEvent::Relay, b.period_index,
        leg.to_rsu ? leg.target : wsn_[leg.target].sink);
    if (direct)
      ++res_.counters.batches_direct;
    else
      ++res_.counters.batches_relayed;
    store_.push_back(std::move(b));
    schedule(now_ + leg.hops * hop_time(bits), EventKind::RelayArrive, static_cast<std::int64_t>(store_.size() - 1),
             leg.to_rsu ? 1 : 0, leg.target);
  }

  void on_relay_arrive(std::size_t idx, bool to_rsu, int target) {
    MeasurementBatch b = std::move(store_[idx]);
    if (to_rsu) {
      rsu_receive(std::move(b), target);
      return;
    }
    debit(wsn_[target].sink, rx_energy_j(b.sensor_count() * cfg_.radio.sensor_packet_bits, cfg_.radio),
          EnergyCategory::Rx);
    if (mode_ == Mode::WsnOnly)
      merge_at(target, std::move(b));
    else
      rn_accept(target, std::move(b));
  }

  void count_batch_delivery(const MeasurementBatch& b) {
    for (const auto& s : b.samples) ++batch_deliveries_[{b.period_index, s.subarea}];
  }

  void rsu_receive(MeasurementBatch b, int rsu) {
    count_batch_delivery(b);
    for (auto& t : decompose_tasks(b, profile_, next_task_, std::nullopt)) {
      const TaskId id = t.id;
      tasks_.push_back(std::move(t));
      ++res_.counters.tasks_created;
      log(ActorKind::Rsu, rsu, LogEvent::TaskCreate, tasks_[id].period_index, tasks_[id].subarea, id);
      mec_accept(id, rsu, 0.0);
    }
  }

  // ---------------------------------------------------------------- vehicles

  void on_adv(int s) {
    auto& st = rn_[s];
    if (st.pending.empty()) {
      st.adv_active = false;
      return;
    }
    const NodeId sink = wsn_[s].sink;
    const Position at = w_.sensors[sink].pos;
    const double adv_bits = cfg_.radio.adv_packet_bits;
    ++res_.counters.adv_messages;
    st.last_adv = now_;
    st.adv_period = st.pending.front().period_index;
    log(ActorKind::Rendezvous, sink, LogEvent::Adv, st.adv_period, static_cast<std::int64_t>(st.pending.size()));
    debit(sink, tx_energy_j(range(), adv_bits, cfg_.clustering, cfg_.radio), EnergyCategory::Tx);
    const AdvMsg adv{sink, st.adv_period, st.pending.front().sensor_count()};
    const double air = adv_bits / cfg_.radio.bitrate_bps;
    for (const auto& v : w_.vehicles) {
      if (distance(v.pos, at) > range()) continue;
      if (!vehicle_on_adv(v, adv)) continue;
      const double backoff = protocol_.uniform(0.0, cfg_.offload.adm_backoff_max_s);
      schedule(now_ + air + backoff + air, EventKind::AdmArrive, s, v.id, adv.period_index);
    }
    schedule(now_ + 2.0 * air + cfg_.offload.adm_backoff_max_s + cfg_.radio.per_hop_latency_s, EventKind::RnTick, s);
  }

  void on_adm(int s, VehicleId v, int period) {
    const NodeId sink = wsn_[s].sink;
    ++res_.counters.adm_messages;
    debit(sink, rx_energy_j(cfg_.radio.adv_packet_bits, cfg_.radio), EnergyCategory::Rx);
    log(ActorKind::Vehicle, v, LogEvent::Adm, period, sink);
    rn_[s].adm.push_back({v, sink, period, now_});
  }

  void on_assign(int s) {
    auto& st = rn_[s];
    const NodeId sink = wsn_[s].sink;
    const Position at = w_.sensors[sink].pos;
    for (auto& a : rn_assign(st.adm, st.pending)) {
      const double bits = a.batch.sensor_count() * cfg_.radio.sensor_packet_bits;
      const auto* v = find_vehicle(a.vehicle);
      const double d = v ? std::min(distance(v->pos, at), range()) : range();
      debit(sink, tx_energy_j(d, bits, cfg_.clustering, cfg_.radio), EnergyCategory::Tx);
      const double start = std::max(now_, st.busy_until);
      st.busy_until = start + hop_time(bits);
      log(ActorKind::Rendezvous, sink, LogEvent::Assign, a.batch.period_index, a.vehicle);
      ++res_.counters.handoffs;
      store_.push_back(std::move(a.batch));
      schedule(st.busy_until, EventKind::Contact, static_cast<std::int64_t>(store_.size() - 1), a.vehicle, s);
    }
    st.adm.clear();
    if (st.pending.empty())
      st.adv_active = false;
    else
      schedule(std::max(now_, st.last_adv + cfg_.adv_period_s), EventKind::AdvTick, s);
  }

  void on_contact(std::size_t idx, VehicleId vid, int s) {
    MeasurementBatch b = std::move(store_[idx]);
    log(ActorKind::Vehicle, vid, LogEvent::Handoff, b.period_index, s);
    count_batch_delivery(b);
    auto tasks = decompose_tasks(b, profile_, next_task_, vid);
    std::vector<TaskId> ids;
    for (auto& t : tasks) {
      ids.push_back(t.id);
      log(ActorKind::Vehicle, vid, LogEvent::TaskCreate, t.period_index, t.subarea, t.id);
      tasks_.push_back(std::move(t));
      ++res_.counters.tasks_created;
    }
    Vehicle& src = vehicle(vid);
    const auto cap = static_cast<std::size_t>(cfg_.offload.cm_queue_capacity);
    std::vector<CmCandidate> members;
    if (!extra(vid).retired) {
      const auto head = vforest_.head_of.find(vid);
      const auto roster = head == vforest_.head_of.end() ? rosters_.end() : rosters_.find(head->second);
      if (roster != rosters_.end())
        for (VehicleId m : roster->second) {
          if (m == vid) continue;
          const auto* mv = find_vehicle(m);
          if (!mv || extra(m).retired) continue;
          members.push_back({m, mv->fa, mv->task_queue.size(), cap});
        }
    }
    const int room = static_cast<int>(cap > src.task_queue.size() ? cap - src.task_queue.size() : 0);
    const auto plan = dispatch_tasks(vid, members, ids, std::min(cfg_.offload.local_keep, room));
    for (const auto& [t, cm] : plan.remote) {
      auto& task = tasks_[t];
      task.transition(TaskState::Dispatched);
      task.assignee = cm;
      enqueue_work(cm, t);
      log(ActorKind::Vehicle, vid, LogEvent::Dispatch, task.period_index, cm, t);
      ++res_.counters.tasks_remote;
      schedule(now_ + v2v_time(task.input_bits), EventKind::TaskArrive, static_cast<std::int64_t>(t));
    }
    for (TaskId t : plan.local) {
      auto& task = tasks_[t];
      task.transition(TaskState::ExecutingLocal);
      task.assignee = vid;
      enqueue_work(vid, t);
      log(ActorKind::Vehicle, vid, LogEvent::ExecLocal, task.period_index, task.subarea, t);
      ++res_.counters.tasks_local;
      start_compute(vid, t);
    }
    for (TaskId t : plan.to_rsu) {
      ++res_.counters.tasks_raw_to_rsu;
      hold(vid, t);
    }
  }

  void enqueue_work(VehicleId v, TaskId t) {
    vehicle(v).task_queue.push_back(t);
    extra(v).queued_cycles += tasks_[t].compute_cycles;
  }

  void start_compute(VehicleId v, TaskId t) {
    auto& veh = vehicle(v);
    const double start = std::max(now_, veh.busy_until_s);
    veh.busy_until_s = start + tasks_[t].compute_cycles / cfg_.vehicles.cm_cpu_rate_cycles_per_s;
    schedule(veh.busy_until_s, EventKind::TaskDone, static_cast<std::int64_t>(t));
  }

  void on_task_arrive(TaskId t) {
    auto& task = tasks_[t];
    task.transition(TaskState::ExecutingRemote);
    log(ActorKind::Vehicle, *task.assignee, LogEvent::ExecRemote, task.period_index, task.subarea, t);
    start_compute(*task.assignee, t);
  }

  void on_task_done(TaskId t) {
    auto& task = tasks_[t];
    const VehicleId e = *task.assignee;
    auto& q = vehicle(e).task_queue;
    q.erase(std::remove(q.begin(), q.end(), t), q.end());
    extra(e).queued_cycles -= task.compute_cycles;
    execute_aqi(task, AqiBreakpointTable::epa());
    if (task.invalid) ++res_.counters.tasks_invalid;
    task.transition(TaskState::Completed);
    log(ActorKind::Vehicle, e, LogEvent::TaskDone, task.period_index, task.subarea, t);
    const VehicleId src = *task.source_vehicle;
    if (e == src) {
      hold(src, t);
      return;
    }
    if (cm_complete(task, same_cluster(src, e)) == ResultRoute::ResultToSource) {
      ++res_.counters.results_to_source;
      log(ActorKind::Vehicle, e, LogEvent::ResultToSource, task.period_index, src, t);
      schedule(now_ + v2v_time(cfg_.radio.task_packet_bits), EventKind::ResultArrive, static_cast<std::int64_t>(t), src);
    } else {
      ++res_.counters.results_held;
      hold(e, t);
    }
  }

  bool same_cluster(VehicleId a, VehicleId b) {
    if (extra(a).retired || extra(b).retired) return false;
    const auto ha = vforest_.head_of.find(a);
    const auto hb = vforest_.head_of.find(b);
    return ha != vforest_.head_of.end() && hb != vforest_.head_of.end() && ha->second == hb->second;
  }

  void hold(VehicleId v, TaskId t) {
    extra(v).held.push_back(t);
    log(ActorKind::Vehicle, v, LogEvent::Hold, tasks_[t].period_index, tasks_[t].subarea, t);
    holders_.insert(v);
    try_deliver(v);
  }

  void try_deliver(VehicleId v) {
    auto& x = extra(v);
    if (x.held.empty()) {
      holders_.erase(v);
      return;
    }
    int rsu = x.terminal_rsu;
    if (!x.retired) {
      const auto& veh = vehicle(v);
      rsu = nearest_rsu(w_, veh.pos);
      if (distance(veh.pos, w_.rsus[rsu]) > cfg_.radio.rsu_range_m) return;
    }
    for (TaskId t : source_at_rsu(x.held, rsu, now_, book_)) {
      auto& task = tasks_[t];
      log(ActorKind::Vehicle, v, LogEvent::Deliver, task.period_index, rsu, t);
      ++res_.counters.tasks_delivered;
      if (task.state == TaskState::Completed) {
        task.transition(TaskState::DeliveredToRsu);
        schedule(now_ + v2v_time(cfg_.radio.task_packet_bits), EventKind::Delivery, static_cast<std::int64_t>(t));
      } else {
        mec_accept(t, rsu, v2v_time(task.input_bits));
      }
    }
    holders_.erase(v);
  }

  // Raw task at an RSU: the MEC server starts it on arrival.
  void mec_accept(TaskId t, int rsu, double upload_s) {
    auto& task = tasks_[t];
    task.transition(TaskState::DeliveredToRsu);
    if (!task.source_vehicle) {
      book_.deliver(t, rsu, now_);
      ++res_.counters.tasks_delivered;
    }
    schedule(now_ + upload_s + task.compute_cycles / cfg_.vehicles.mec_cpu_rate_cycles_per_s, EventKind::MecDone,
             static_cast<std::int64_t>(t), rsu);
  }

  void on_mec_done(TaskId t) {
    auto& task = tasks_[t];
    execute_aqi(task, AqiBreakpointTable::epa());
    if (task.invalid) ++res_.counters.tasks_invalid;
    log(ActorKind::Sim, 0, LogEvent::MecDone, task.period_index, task.subarea, t);
    record_result(t);
  }

  void record_result(TaskId t) {
    const auto& task = tasks_[t];
    auto& ps = periods_.at(task.period_index);
    const int s = task.subarea;
    log(ActorKind::Sim, 0, LogEvent::AqiAtRsu, task.period_index, s, t);
    if (ps.done[s]) {
      problem(res_.audit.tasks_ok, "sub-area " + std::to_string(s) + " period " + std::to_string(task.period_index) +
                                       " delivered twice");
      return;
    }
    ps.done[s] = 1;
    ++ps.delivered;
    ps.last = std::max(ps.last, now_);
  }

  void on_mobility() {
    for (auto& v : mobility_tick(w_, cfg_.mobility_dt_s)) {
      auto& x = extra(v.id);
      x.retired = true;
      Position exit = v.pos;
      exit.x = std::clamp(exit.x, 0.0, cfg_.road_length_km * 1000.0);
      x.terminal_rsu = nearest_rsu(w_, exit);
      log(ActorKind::Vehicle, v.id, LogEvent::Retire, -1, x.terminal_rsu);
      ++res_.counters.vehicles_retired;
      const VehicleId id = v.id;
      retired_.emplace(id, std::move(v));
      try_deliver(id);
    }
    res_.counters.vehicles_spawned = w_.next_vehicle_id;
    const std::vector<VehicleId> holding(holders_.begin(), holders_.end());
    for (VehicleId v : holding) try_deliver(v);
    if (keep_ticking()) schedule(now_ + cfg_.mobility_dt_s, EventKind::MobilityTick);
  }

  void on_recluster() {
    auto next = form_vanet_clusters(w_.vehicles, cfg_.vanet);
    for (const auto& [v, h] : next.head_of) {
      const auto old = vforest_.head_of.find(v);
      if (old != vforest_.head_of.end() && old->second != h) ++res_.counters.ch_changes;
    }
    vforest_ = std::move(next);
    apply_forest(w_.vehicles, vforest_);
    rosters_ = cluster_rosters(vforest_);
    log(ActorKind::Sim, 0, LogEvent::Recluster, -1, static_cast<std::int64_t>(vforest_.heads.size()));
    if (keep_ticking()) schedule(now_ + cfg_.vanet.recluster_period_s, EventKind::ReclusterTick);
  }

  void on_fa() {
    const double capacity = cfg_.vehicles.cm_cpu_rate_cycles_per_s * cfg_.offload.capacity_horizon_s;
    std::vector<MemberLoad> loads;
    for (const auto& [head, members] : rosters_) {
      loads.clear();
      for (VehicleId m : members)
        if (find_vehicle(m) && !extra(m).retired) loads.push_back({extra(m).queued_cycles, capacity});
      const bool fa = ch_update_fa(loads, cfg_.vehicles.cm_capacity_threshold);
      for (VehicleId m : members) {
        auto* v = find_vehicle(m);
        if (!v || extra(m).retired || v->fa == fa) continue;
        v->fa = fa;
        log(ActorKind::Vehicle, m, LogEvent::FaChange, -1, fa ? 1 : 0);
      }
    }
    if (keep_ticking()) schedule(now_ + cfg_.fa_update_period_s, EventKind::FaTick);
  }

  // ---------------------------------------------------------------- wrap-up

  void finish() {
    auto& c = res_.counters;
    c.end_time_s = now_;
    for (std::size_t p = 0; p < periods_.size(); ++p) {
      const auto& ps = periods_[p];
      PeriodMetrics m;
      m.period = static_cast<int>(p);
      m.start_s = ps.start;
      m.subareas_total = static_cast<int>(w_.subareas.size());
      m.subareas_delivered = ps.delivered;
      m.complete = ps.delivered == m.subareas_total;
      m.completion_time_s = m.complete ? ps.last - ps.start : 0.0;
      res_.periods.push_back(m);
    }

    auto& a = res_.audit;
    for (const auto& t : tasks_)
      if (t.state != TaskState::DeliveredToRsu)
        problem(a.tasks_ok, "task " + std::to_string(t.id) + " ended in state " + std::string(task_state_name(t.state)));
    if (book_.duplicate_offers() != 0)
      problem(a.tasks_ok, std::to_string(book_.duplicate_offers()) + " duplicate RSU deliveries");
    if (book_.size() != tasks_.size())
      problem(a.tasks_ok, std::to_string(tasks_.size()) + " tasks created but " + std::to_string(book_.size()) +
                              " reached an RSU");
    for (const auto& key : produced_) {
      const auto it = batch_deliveries_.find(key);
      const int n = it == batch_deliveries_.end() ? 0 : it->second;
      if (n != 1)
        problem(a.batches_ok, "batch of sub-area " + std::to_string(key.second) + " period " +
                                  std::to_string(key.first) + " delivered " + std::to_string(n) + " times");
    }
    for (const auto& [key, n] : batch_deliveries_)
      if (!produced_.count(key)) problem(a.batches_ok, "delivery of a batch that was never produced");
    if (!ledger_.conserved()) problem(a.energy_ok, "sensor energy ledger does not balance");

    c.ch_changes_per_min = now_ > 0.0 ? c.ch_changes / (now_ / 60.0) : 0.0;
    c.energy_tx_j = ledger_.total_debited(EnergyCategory::Tx);
    c.energy_rx_j = ledger_.total_debited(EnergyCategory::Rx);
    c.energy_sleep_j = ledger_.total_debited(EnergyCategory::Sleep);
    c.network_lifetime_s = ledger_.network_lifetime();
    c.alive_fraction_end = ledger_.alive_fraction(now_);
    c.dead_debit_attempts = ledger_.dead_debit_attempts();
    res_.ledger = std::move(ledger_);
  }

  World w_;
  const ScenarioConfig& cfg_;
  Mode mode_;
  RunOptions opt_;
  double duration_;
  Rng readings_;
  Rng protocol_;
  EnergyLedger ledger_;
  AppProfile profile_;
  RunResult res_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> q_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  std::vector<SubareaWsn> wsn_;
  Chain chain_;
  std::map<int, Chain> chains_;
  std::map<int, Gather> gathers_;
  std::map<int, std::vector<SubareaSample>> samples_;
  std::map<std::pair<int, int>, Merge> merges_;
  std::vector<RnState> rn_;
  std::vector<MeasurementBatch> store_;

  std::vector<Task> tasks_;  // tasks_[id].id == id
  TaskId next_task_ = 0;
  RsuDeliveryBook book_;
  std::set<std::pair<int, int>> produced_;
  std::map<std::pair<int, int>, int> batch_deliveries_;
  std::vector<PeriodState> periods_;

  VanetForest vforest_;
  std::map<VehicleId, std::vector<VehicleId>> rosters_;
  std::vector<VehicleExtra> extras_;
  std::map<VehicleId, Vehicle> retired_;
  std::set<VehicleId> holders_;
};

}  // namespace

RunResult run(const World& world, double duration_s, Mode mode, const RunOptions& options) {
  Simulation sim(world, duration_s, mode, options);
  return sim.run();
}

}  // namespace hwmon
