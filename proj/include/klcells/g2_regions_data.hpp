#pragma once

#include <string_view>

namespace klcells {

inline constexpr std::string_view g2_regions_json = R"json({
 "labels": ["IDENT", "E1", "E2", "F", "D1", "D2", "D3", "A1", "A2", "A3", "A4", "A5", "A6", "A'1", "A'2", "A'3", "A'4", "A'5", "A'6", "B1", "B2", "B3", "B4", "B5", "B6", "C1", "C2", "C3", "C4", "C5", "C6"],
 "finite": {
  "IDENT": [[0,0,0,0,0,0]],
  "E1": [[0,0,0,1,0,0], [0,0,1,1,0,0]],
  "E2": [[0,-1,0,0,0,0], [0,-1,1,0,0,0]],
  "F": [[0,-1,1,1,0,0]],
  "D1": [[-1,0,0,0,0,0], [-1,0,-1,0,0,0], [-1,0,-1,0,0,-1], [-1,1,-1,0,0,0], [-1,0,-1,-1,0,-1], [-1,0,-2,-1,0,-1]],
  "D2": [[0,-1,0,0,-1,0], [0,-1,0,-1,-1,0], [0,-2,0,-1,-1,0], [0,-1,0,-1,-1,-1], [0,-1,-1,-1,-1,-1], [0,-1,-1,-2,-1,-1]],
  "D3": [[0,0,1,1,0,1], [0,0,1,2,0,1], [0,0,1,2,1,1], [0,0,2,2,0,1], [0,1,1,2,1,1], [0,1,1,3,1,1]]
 },
 "sectors": {
  "A1": [[[null,-1],[null,-1],[null,null],[null,null],[null,null],[null,null]]],
  "A2": [[[null,null],[null,null],[null,null],[1,null],[null,null],[null,-1]]],
  "A3": [[[null,-1],[null,null],[1,null],[null,null],[null,null],[null,null]]],
  "A4": [[[1,null],[null,-1],[null,null],[null,null],[1,null],[null,null]]],
  "A5": [[[null,null],[null,null],[null,null],[1,null],[null,-1],[null,null]]],
  "A6": [[[null,null],[null,null],[1,null],[null,null],[null,null],[null,-1]]],
  "A'1": [[[null,null],[1,null],[null,null],[null,null],[null,-1],[null,null]]],
  "A'2": [[[null,null],[null,null],[null,null],[null,-1],[1,null],[null,null]]],
  "A'3": [[[null,null],[null,null],[null,-1],[null,null],[null,null],[1,null]]],
  "A'4": [[[1,null],[1,null],[null,null],[null,null],[null,null],[null,null]]],
  "A'5": [[[null,null],[null,null],[null,null],[null,-1],[null,null],[1,null]]],
  "A'6": [[[1,null],[null,null],[null,-1],[null,null],[null,null],[null,null]]],
  "B1": [[[null,null],[1,null],[null,null],[null,null],[0,0],[null,-1]]],
  "B2": [[[null,-1],[null,null],[null,null],[1,null],[null,null],[0,0]]],
  "B3": [[[0,0],[0,null],[null,null],[null,null],[1,null],[null,null]], [[0,0],[0,null],[2,null],[null,null],[null,null],[null,null]]],
  "B4": [[[null,null],[null,-1],[null,null],[null,null],[0,0],[1,null]]],
  "B5": [[[null,null],[null,null],[1,null],[null,null],[null,-1],[0,0]]],
  "B6": [[[0,0],[null,-2],[null,null],[null,null],[null,null],[null,-1]]],
  "C1": [[[null,null],[0,0],[null,null],[null,null],[null,-1],[null,null]]],
  "C2": [[[null,null],[null,null],[null,null],[0,0],[1,null],[null,null]]],
  "C3": [[[null,null],[null,null],[0,0],[null,null],[null,null],[1,null]]],
  "C4": [[[1,null],[0,0],[null,null],[null,null],[null,null],[null,null]]],
  "C5": [[[null,null],[null,null],[null,null],[0,0],[null,null],[1,null]]],
  "C6": [[[1,null],[null,null],[0,0],[null,null],[null,null],[null,-1]]]
 }
}
)json";

}
