// Logging node: reports every violation message to the
// default logger. Remove it from the build to disable.

#include <memory>

#include "rclcpp/rclcpp.hpp"
#include "std_msgs/msg/empty.hpp"

class LoggerNode : public rclcpp::Node {
public:
  LoggerNode() : Node("ros_component_monitoring_logger_node") {
    handlerpropROS_001_subscription_ = this->create_subscription<std_msgs::msg::Empty>(
        "copilot/handlerpropROS_001", 10,
        [this](const std_msgs::msg::Empty::SharedPtr) {
          RCLCPP_WARN(this->get_logger(), "violation: handlerpropROS_001");
        });
  }

private:
  rclcpp::Subscription<std_msgs::msg::Empty>::SharedPtr handlerpropROS_001_subscription_;
};

int main(int argc, char ** argv) {
  rclcpp::init(argc, argv);
  rclcpp::spin(std::make_shared<LoggerNode>());
  rclcpp::shutdown();
  return 0;
}
