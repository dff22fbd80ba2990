from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from database.connection import Base


class VerificationRun(Base):
    __tablename__ = "verification_runs"

    id = Column(Integer, primary_key=True, index=True, autoincrement=True)
    scenario_hash = Column(String(64), nullable=False, index=True)
    source = Column(String(255), nullable=True)  # scenario file path or "seed:<n>"
    dimension = Column(Integer, nullable=False)
    system_count = Column(Integer, nullable=False)
    total_qudits = Column(Integer, nullable=False)
    label_count = Column(Integer, nullable=False)
    feasible_count = Column(Integer, nullable=False)
    passed = Column(Boolean, nullable=False, index=True)
    max_fidelity_deviation = Column(Float, nullable=False)
    max_probability_deviation = Column(Float, nullable=False)
    wall_time_seconds = Column(Float, nullable=False)
    created_at = Column(DateTime(timezone=True), server_default=func.now())

    failures = relationship("LabelFailure", back_populates="run", cascade="all, delete-orphan")

    def __repr__(self):
        return f"<VerificationRun(id={self.id}, dimension={self.dimension}, passed={self.passed})>"


class LabelFailure(Base):
    __tablename__ = "label_failures"

    id = Column(Integer, primary_key=True, index=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey("verification_runs.id"), nullable=False)
    label = Column(String(255), nullable=False)  # bell(r; s1,...)
    feasible = Column(Boolean, nullable=False)
    probability = Column(Float, nullable=False)
    fidelity = Column(Float, nullable=True)

    run = relationship("VerificationRun", back_populates="failures")

    def __repr__(self):
        return f"<LabelFailure(id={self.id}, run_id={self.run_id}, label={self.label})>"
