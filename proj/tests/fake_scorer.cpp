// Misbehaving scorer process for transport and protocol error-path tests.
//
//   fake_scorer echo            first candidate wins; acknowledges forced passages
//   fake_scorer bad-json        replies with an unparseable line
//   fake_scorer wrong-count     one score too few
//   fake_scorer ignore-forced   never acknowledges forced passages
//   fake_scorer exit            exits after reading one request
//   fake_scorer hang            reads requests, never replies
//   fake_scorer crash-once F    exits on first start (creating F), then echo

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "paracons/protocol.hpp"

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "echo";
  if (mode == "crash-once") {
    if (argc < 3) return 2;
    if (!std::filesystem::exists(argv[2])) {
      std::ofstream(argv[2]) << "started\n";
      return 0;
    }
    mode = "echo";
  }
  std::string line;
  while (std::getline(std::cin, line)) {
    if (mode == "exit") return 0;
    if (mode == "hang") continue;
    if (mode == "bad-json") {
      std::cout << "{this is not json" << std::endl;
      continue;
    }
    const auto req = paracons::parse_request(line);
    paracons::ScoreResponse r;
    r.request_id = req.request_id;
    r.scores.assign(req.candidates.size(), -1.0);
    r.scores[0] = 0.0;
    if (mode == "wrong-count") r.scores.pop_back();
    if (req.forced_passages) {
      r.forced_passages_applied = mode != "ignore-forced";
      r.passages = req.forced_passages;
    }
    std::cout << paracons::to_line(r) << std::endl;
  }
  return 0;
}
