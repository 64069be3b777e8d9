#include "manet/dsdv/forwarding.hpp"

#include <algorithm>

namespace manet::dsdv {

ForwardDecision forward(const RoutingTable& table, NodeId dst, std::uint32_t hops,
                        const DsdvConfig& cfg) {
  if (hops >= cfg.ttl) return {ForwardAction::drop_ttl, 0};
  if (auto next = table.next_hop(dst)) return {ForwardAction::transmit, *next};
  return {ForwardAction::buffer, 0};
}

bool PendingBuffer::push(const PendingPacket& p) {
  if (packets_.size() >= capacity_) return false;
  packets_.push_back(p);
  return true;
}

std::vector<PendingPacket> PendingBuffer::release(NodeId dst) {
  std::vector<PendingPacket> out;
  auto keep = std::stable_partition(packets_.begin(), packets_.end(),
                                    [dst](const PendingPacket& p) { return p.dst != dst; });
  out.assign(keep, packets_.end());
  packets_.erase(keep, packets_.end());
  return out;
}

bool PendingBuffer::remove(std::uint64_t id) {
  auto it = std::find_if(packets_.begin(), packets_.end(),
                         [id](const PendingPacket& p) { return p.id == id; });
  if (it == packets_.end()) return false;
  packets_.erase(it);
  return true;
}

bool PendingBuffer::holds_for(NodeId dst) const {
  return std::any_of(packets_.begin(), packets_.end(),
                     [dst](const PendingPacket& p) { return p.dst == dst; });
}

}  // namespace manet::dsdv
