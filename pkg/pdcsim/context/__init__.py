# Run context management for pdcsim
