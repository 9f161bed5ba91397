#include "vrt/event_queue.h"

#include <stdexcept>

namespace vrt {

void EventQueue::schedule(Event ev) {
  if (ev.fire_time < clock_)
    throw std::invalid_argument("EventQueue::schedule: event is past-dated");
  ev.sequence = next_sequence_++;
  heap_.push(std::move(ev));
}

Event EventQueue::pop() {
  if (heap_.empty()) throw std::logic_error("EventQueue::pop: queue empty");
  Event ev = heap_.top();
  heap_.pop();
  clock_ = ev.fire_time;
  return ev;
}

}  // namespace vrt
